#pragma once

// Instance files: one JSON document naming complexes, maps, cospans, squares and cospan
// morphisms over a fixed prime. Canonical form is nlohmann's compact dump (sorted keys,
// no whitespace).
//
//   {"p": 5,
//    "complexes": {"X": {"0": {"dim": 2}, "1": {"dim": 1, "d": [[1], [0]]}}},
//    "maps": {"f": {"src": "X", "tgt": "Y", "components": {"0": [[1, 0]]}}},
//    "cospans": {"K": {"g": "g", "f": "f"}},
//    "squares": {"S": {"u": "u", "v": "v", "cospan": "K"}},
//    "cospan_morphisms": {"phi": {"src": "K", "tgt": "L", "c": "..", "d": "..", "b": ".."}},
//    "meta": {...}}
//
// d(n) has shape dim(n-1) x dim(n) and may be omitted (zero); map components likewise.

#include "hopb/hopull.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace hopb {

using json = nlohmann::json;

/// Malformed input. The message starts with the location (byte offset or field path).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct NamedMap {
    std::string src, tgt;
    ChainMap map;
};

struct NamedCospan {
    std::string g, f;
    Cospan cospan;
};

struct NamedSquare {
    std::string u, v, cospan;
    CommSquare square;
};

struct NamedMorphism {
    std::string src, tgt, c, d, b;
    CospanMorphism morphism;
};

struct InstanceFile {
    std::uint32_t p = 2;
    std::map<std::string, ChainComplex> complexes;
    std::map<std::string, NamedMap> maps;
    std::map<std::string, NamedCospan> cospans;
    std::map<std::string, NamedSquare> squares;
    std::map<std::string, NamedMorphism> morphisms;
    json meta = json::object();

    FieldCtx field() const { return FieldCtx(p); }

    const ChainComplex& complex(const std::string& name) const { return find(complexes, name, "complex"); }
    const ChainMap& map(const std::string& name) const { return find(maps, name, "map").map; }
    const Cospan& cospan(const std::string& name) const { return find(cospans, name, "cospan").cospan; }
    const CommSquare& square(const std::string& name) const { return find(squares, name, "square").square; }
    const CospanMorphism& morphism(const std::string& name) const
    {
        return find(morphisms, name, "cospan morphism").morphism;
    }

    /// The only entry of a section, for single-object commands.
    template <class T>
    static const std::string& sole(const std::map<std::string, T>& section, const char* what)
    {
        if (section.size() != 1)
            throw ParseError(std::string("instance must contain exactly one ") + what + ", found " +
                             std::to_string(section.size()) + " (name one explicitly)");
        return section.begin()->first;
    }

private:
    template <class T>
    static const T& find(const std::map<std::string, T>& section, const std::string& name, const char* what)
    {
        auto it = section.find(name);
        if (it == section.end())
            throw ParseError(std::string("no ") + what + " named '" + name + "'");
        return it->second;
    }
};

// ---------------------------------------------------------------------------
// Serialization

inline json matrix_to_json(const Matrix& m)
{
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c)
            row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json complex_to_json(const ChainComplex& x)
{
    json out = json::object();
    for (auto [n, k] : x.dims()) {
        json entry = {{"dim", k}};
        if (x.dim(n - 1))
            entry["d"] = matrix_to_json(x.d(n));
        out[std::to_string(n)] = std::move(entry);
    }
    return out;
}

inline json map_to_json(const NamedMap& m)
{
    json comps = json::object();
    for (auto [n, k] : m.map.src().dims())
        if (m.map.tgt().dim(n))
            comps[std::to_string(n)] = matrix_to_json(m.map.at(n));
    return {{"src", m.src}, {"tgt", m.tgt}, {"components", std::move(comps)}};
}

inline json to_json(const InstanceFile& f)
{
    json out = {{"p", f.p}, {"meta", f.meta}};
    json complexes = json::object(), maps = json::object(), cospans = json::object(),
         squares = json::object(), morphisms = json::object();
    for (const auto& [name, x] : f.complexes)
        complexes[name] = complex_to_json(x);
    for (const auto& [name, m] : f.maps)
        maps[name] = map_to_json(m);
    for (const auto& [name, c] : f.cospans)
        cospans[name] = {{"g", c.g}, {"f", c.f}};
    for (const auto& [name, s] : f.squares)
        squares[name] = {{"u", s.u}, {"v", s.v}, {"cospan", s.cospan}};
    for (const auto& [name, m] : f.morphisms)
        morphisms[name] = {{"src", m.src}, {"tgt", m.tgt}, {"c", m.c}, {"d", m.d}, {"b", m.b}};
    out["complexes"] = std::move(complexes);
    out["maps"] = std::move(maps);
    out["cospans"] = std::move(cospans);
    out["squares"] = std::move(squares);
    out["cospan_morphisms"] = std::move(morphisms);
    return out;
}

inline std::string to_canonical_string(const InstanceFile& f) { return to_json(f).dump(); }

inline void write_instance(const InstanceFile& f, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    out << to_canonical_string(f) << '\n';
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

inline const json& field_of(const json& obj, const std::string& key, const std::string& where)
{
    if (!obj.is_object())
        throw ParseError(where + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end())
        throw ParseError(where + ": missing field '" + key + "'");
    return *it;
}

inline std::string string_of(const json& obj, const std::string& key, const std::string& where)
{
    const json& v = field_of(obj, key, where);
    if (!v.is_string())
        throw ParseError(where + "." + key + ": expected a name");
    return v.get<std::string>();
}

inline const json& object_section(const json& doc, const char* key)
{
    static const json empty = json::object();
    auto it = doc.find(key);
    if (it == doc.end())
        return empty;
    if (!it->is_object())
        throw ParseError(std::string(key) + ": expected an object");
    return *it;
}

inline int parse_degree(const std::string& key, const std::string& where)
{
    std::size_t used = 0;
    int n = 0;
    try {
        n = std::stoi(key, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != key.size() || std::to_string(n) != key)
        throw ParseError(where + ": degree key '" + key + "' is not an integer");
    return n;
}

inline Matrix parse_matrix(const json& j, FieldCtx F, std::size_t rows, std::size_t cols,
                           const std::string& where)
{
    if (!j.is_array())
        throw ParseError(where + ": expected an array of rows");
    if (j.size() != rows)
        throw ParseError(where + ": expected shape " + std::to_string(rows) + "x" + std::to_string(cols) +
                         ", found " + std::to_string(j.size()) + " rows");
    Matrix m(F, rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const json& row = j[r];
        const std::string rw = where + "[" + std::to_string(r) + "]";
        if (!row.is_array() || row.size() != cols)
            throw ParseError(rw + ": expected a row of " + std::to_string(cols) + " entries");
        for (std::size_t c = 0; c < cols; ++c) {
            const json& e = row[c];
            const std::string ew = rw + "[" + std::to_string(c) + "]";
            if (!e.is_number_integer())
                throw ParseError(ew + ": expected an integer");
            const auto v = e.get<std::int64_t>();
            if (v < 0 || v >= static_cast<std::int64_t>(F.p()))
                throw ParseError(ew + ": entry " + std::to_string(v) + " not in [0, " + std::to_string(F.p()) + ")");
            m.set(r, c, static_cast<std::uint32_t>(v));
        }
    }
    return m;
}

inline ChainComplex parse_complex(const json& j, FieldCtx F, const std::string& where)
{
    if (!j.is_object())
        throw ParseError(where + ": expected an object of degrees");
    std::map<int, std::size_t> dims;
    for (const auto& [key, entry] : j.items()) {
        const std::string dw = where + "." + key;
        const int n = parse_degree(key, dw);
        const json& dim = field_of(entry, "dim", dw);
        if (!dim.is_number_unsigned())
            throw ParseError(dw + ".dim: expected a non-negative integer");
        dims[n] = dim.get<std::size_t>();
    }
    auto dim_at = [&](int n) { return dims.count(n) ? dims.at(n) : std::size_t{0}; };
    std::map<int, Matrix> d;
    for (const auto& [key, entry] : j.items()) {
        const int n = parse_degree(key, where);
        auto it = entry.find("d");
        if (it != entry.end())
            d.emplace(n, parse_matrix(*it, F, dim_at(n - 1), dim_at(n), where + "." + key + ".d"));
    }
    try {
        return ChainComplex(F, std::move(dims), std::move(d));
    } catch (const InvariantError& e) {
        throw InvariantError(where + ": " + e.what());
    }
}

template <class T>
const T& resolve(const std::map<std::string, T>& section, const std::string& name, const char* what,
                 const std::string& where)
{
    auto it = section.find(name);
    if (it == section.end())
        throw ParseError(where + ": unknown " + what + " '" + name + "'");
    return it->second;
}

template <class Fn>
auto with_location(const std::string& where, Fn&& fn) -> decltype(fn())
{
    try {
        return fn();
    } catch (const InvariantError& e) {
        throw InvariantError(where + ": " + e.what());
    }
}

}  // namespace detail

/// Parses and validates an instance document. Throws ParseError for malformed input and
/// InvariantError (prefixed with the object path) when a parsed object breaks an identity.
inline InstanceFile parse_instance_text(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("byte ") + std::to_string(e.byte) + ": " + e.what());
    }
    if (!doc.is_object())
        throw ParseError("document: expected a JSON object");
    InstanceFile f;
    const json& p = detail::field_of(doc, "p", "document");
    if (!p.is_number_unsigned())
        throw ParseError("p: expected a prime");
    try {
        f.p = static_cast<std::uint32_t>(FieldCtx(p.get<std::uint64_t>()).p());
    } catch (const InvariantError& e) {
        throw ParseError(std::string("p: ") + e.what());
    }
    const FieldCtx F(f.p);

    for (const auto& [name, j] : detail::object_section(doc, "complexes").items())
        f.complexes.emplace(name, detail::parse_complex(j, F, "complexes." + name));

    for (const auto& [name, j] : detail::object_section(doc, "maps").items()) {
        const std::string where = "maps." + name;
        NamedMap m{detail::string_of(j, "src", where), detail::string_of(j, "tgt", where),
                   ChainMap::zero(ChainComplex::zero(F), ChainComplex::zero(F))};
        const ChainComplex& src = detail::resolve(f.complexes, m.src, "complex", where + ".src");
        const ChainComplex& tgt = detail::resolve(f.complexes, m.tgt, "complex", where + ".tgt");
        std::map<int, Matrix> comps;
        auto it = j.find("components");
        if (it != j.end()) {
            if (!it->is_object())
                throw ParseError(where + ".components: expected an object of degrees");
            for (const auto& [key, mat] : it->items()) {
                const std::string cw = where + ".components." + key;
                const int n = detail::parse_degree(key, cw);
                comps.emplace(n, detail::parse_matrix(mat, F, tgt.dim(n), src.dim(n), cw));
            }
        }
        m.map = detail::with_location(where, [&] { return ChainMap(src, tgt, std::move(comps)); });
        f.maps.emplace(name, std::move(m));
    }

    for (const auto& [name, j] : detail::object_section(doc, "cospans").items()) {
        const std::string where = "cospans." + name;
        const std::string g = detail::string_of(j, "g", where), fl = detail::string_of(j, "f", where);
        const ChainMap& gm = detail::resolve(f.maps, g, "map", where + ".g").map;
        const ChainMap& fm = detail::resolve(f.maps, fl, "map", where + ".f").map;
        f.cospans.emplace(name, NamedCospan{g, fl, detail::with_location(where, [&] { return Cospan(gm, fm); })});
    }

    for (const auto& [name, j] : detail::object_section(doc, "squares").items()) {
        const std::string where = "squares." + name;
        const std::string u = detail::string_of(j, "u", where), v = detail::string_of(j, "v", where),
                          k = detail::string_of(j, "cospan", where);
        const ChainMap& um = detail::resolve(f.maps, u, "map", where + ".u").map;
        const ChainMap& vm = detail::resolve(f.maps, v, "map", where + ".v").map;
        const Cospan& km = detail::resolve(f.cospans, k, "cospan", where + ".cospan").cospan;
        f.squares.emplace(name, NamedSquare{u, v, k, detail::with_location(where, [&] { return CommSquare(um, vm, km); })});
    }

    for (const auto& [name, j] : detail::object_section(doc, "cospan_morphisms").items()) {
        const std::string where = "cospan_morphisms." + name;
        NamedMorphism m{detail::string_of(j, "src", where), detail::string_of(j, "tgt", where),
                        detail::string_of(j, "c", where),   detail::string_of(j, "d", where),
                        detail::string_of(j, "b", where),   CospanMorphism::identity(terminal_cospan(F))};
        const Cospan& s = detail::resolve(f.cospans, m.src, "cospan", where + ".src").cospan;
        const Cospan& t = detail::resolve(f.cospans, m.tgt, "cospan", where + ".tgt").cospan;
        const ChainMap& c = detail::resolve(f.maps, m.c, "map", where + ".c").map;
        const ChainMap& d = detail::resolve(f.maps, m.d, "map", where + ".d").map;
        const ChainMap& b = detail::resolve(f.maps, m.b, "map", where + ".b").map;
        m.morphism = detail::with_location(where, [&] { return CospanMorphism(s, t, c, d, b); });
        f.morphisms.emplace(name, std::move(m));
    }

    auto meta = doc.find("meta");
    if (meta != doc.end())
        f.meta = *meta;
    return f;
}

inline InstanceFile parse_instance(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_instance_text(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    } catch (const InvariantError& e) {
        throw InvariantError(path + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Building instances from values

/// Collects values into an instance. The add_* calls register under exactly the given
/// name; the parts they reference (complexes of a map, legs of a cospan, ...) are interned
/// under generated names, reusing the name of an equal value already present.
class InstanceBuilder {
public:
    explicit InstanceBuilder(FieldCtx field) { f_.p = field.p(); }

    std::string complex(const ChainComplex& x, const std::string& name)
    {
        return put(f_.complexes, name, x, [&] { return x; });
    }
    std::string map(const ChainMap& m, const std::string& name)
    {
        return put(f_.maps, name, m, [&] { return NamedMap{intern(m.src()), intern(m.tgt()), m}; });
    }
    std::string cospan(const Cospan& x, const std::string& name)
    {
        return put(f_.cospans, name, x, [&] { return NamedCospan{intern(x.g(), "g"), intern(x.f(), "f"), x}; });
    }
    std::string square(const CommSquare& s, const std::string& name)
    {
        return put(f_.squares, name, s, [&] {
            return NamedSquare{intern(s.u(), "u"), intern(s.v(), "v"), intern(s.cospan()), s};
        });
    }
    std::string morphism(const CospanMorphism& m, const std::string& name)
    {
        return put(f_.morphisms, name, m, [&] {
            return NamedMorphism{intern(m.src()), intern(m.tgt()), intern(m.on_c(), "phi_c"),
                                 intern(m.on_d(), "phi_d"), intern(m.on_b(), "phi_b"), m};
        });
    }

    json& meta() { return f_.meta; }

    InstanceFile build() const { return f_; }

private:
    static const ChainComplex& value_of(const ChainComplex& x) { return x; }
    static const ChainMap& value_of(const NamedMap& x) { return x.map; }
    static const Cospan& value_of(const NamedCospan& x) { return x.cospan; }
    static const CommSquare& value_of(const NamedSquare& x) { return x.square; }
    static const CospanMorphism& value_of(const NamedMorphism& x) { return x.morphism; }

    template <class Entry, class Value, class Make>
    static std::string put(std::map<std::string, Entry>& section, const std::string& name, const Value& v, Make&& make)
    {
        auto it = section.find(name);
        if (it != section.end()) {
            if (!(value_of(it->second) == v))
                throw std::invalid_argument("instance already has a different entry named '" + name + "'");
            return name;
        }
        section.emplace(name, make());
        return name;
    }

    template <class Entry, class Value>
    static std::optional<std::string> existing(const std::map<std::string, Entry>& section, const Value& v)
    {
        for (const auto& [name, e] : section)
            if (value_of(e) == v)
                return name;
        return std::nullopt;
    }

    std::string intern(const ChainComplex& x)
    {
        if (auto n = existing(f_.complexes, x))
            return *n;
        return complex(x, fresh(f_.complexes, "X"));
    }
    std::string intern(const ChainMap& m, const std::string& hint)
    {
        if (auto n = existing(f_.maps, m))
            return *n;
        return map(m, fresh(f_.maps, hint));
    }
    std::string intern(const Cospan& x)
    {
        if (auto n = existing(f_.cospans, x))
            return *n;
        return cospan(x, fresh(f_.cospans, "K"));
    }

    template <class T>
    static std::string fresh(const std::map<std::string, T>& section, const std::string& hint)
    {
        if (!section.count(hint))
            return hint;
        for (std::size_t k = 1;; ++k) {
            std::string name = hint + std::to_string(k);
            if (!section.count(name))
                return name;
        }
    }

    InstanceFile f_;
};

}  // namespace hopb
