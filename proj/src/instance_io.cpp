#include "idemx/instance_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "idemx/error.hpp"

namespace idemx {

namespace {

[[noreturn]] void fail_parse(const std::string& what, const std::string& field) {
    throw Error(Errc::parse_error, what, field);
}

const json& member(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) {
        fail_parse("missing key '" + std::string(key) + "'", where.empty() ? key : where + "." + key);
    }
    return j.at(key);
}

std::vector<std::string> string_list(const json& j, const std::string& field) {
    if (!j.is_array()) {
        fail_parse("expected a list of point identifiers", field);
    }
    std::vector<std::string> out;
    for (const auto& e : j) {
        if (!e.is_string()) {
            fail_parse("point identifiers are strings", field);
        }
        out.push_back(e.get<std::string>());
    }
    return out;
}

double number(const json& j, const std::string& field) {
    if (!j.is_number()) {
        fail_parse("expected a number", field);
    }
    return j.get<double>();
}

const json& space_part(const json& j) {
    if (j.is_object() && j.contains("space")) {
        return j.at("space");
    }
    return j;
}

} // namespace

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(Errc::io_error, "cannot read " + path.string(), path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw Error(Errc::parse_error, e.what(), path.string());
    }
}

FiniteTopSpace space_from_json(const json& j) {
    auto points = string_list(member(j, "points", ""), "points");
    std::map<std::string, std::vector<std::string>> nbhd;
    if (j.contains("min_nbhd")) {
        const auto& m = j.at("min_nbhd");
        if (!m.is_object()) {
            fail_parse("min_nbhd must map points to lists", "min_nbhd");
        }
        for (const auto& [key, value] : m.items()) {
            nbhd[key] = string_list(value, "min_nbhd." + key);
        }
    }
    return FiniteTopSpace::from_minimal_basis(std::move(points), nbhd);
}

MetricSpace metric_from_json(const json& j) {
    auto points = string_list(member(j, "points", ""), "points");
    const auto& d = member(j, "dist", "");
    if (!d.is_array()) {
        fail_parse("dist must be a matrix", "dist");
    }
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (!d[i].is_array()) {
            fail_parse("dist must be a matrix", "dist");
        }
        std::vector<double> row;
        for (std::size_t k = 0; k < d[i].size(); ++k) {
            row.push_back(number(d[i][k], "dist"));
        }
        rows.push_back(std::move(row));
    }
    return MetricSpace(std::move(points), std::move(rows));
}

SubspaceEmbedding embedding_from_json(const json& j) {
    FiniteTopSpace space = space_from_json(space_part(j));
    const auto names = string_list(member(j, "subspace", ""), "subspace");
    const Mask subset = space.mask_of(names, "subspace");
    return SubspaceEmbedding(std::move(space), subset);
}

SetValuedMap map_from_json(const json& map, const SubspaceEmbedding& embedding) {
    if (!map.is_object()) {
        fail_parse("map must be an object of point -> list", "map");
    }
    const auto& y = embedding.ambient();
    const auto& x = embedding.subspace();
    std::vector<Mask> images(y.size(), 0);
    for (const auto& [key, value] : map.items()) {
        const auto idx = y.index_of(key);
        if (!idx) {
            throw Error(Errc::invariant_violation, "unknown point '" + key + "'", "map");
        }
        images[*idx] = x.mask_of(string_list(value, "map." + key), "map." + key);
        if (images[*idx] == 0) {
            throw Error(Errc::invariant_violation, "images must be nonempty", "map." + key);
        }
    }
    for (std::size_t p = 0; p < y.size(); ++p) {
        if (images[p] != 0) {
            continue;
        }
        if (const auto i = embedding.subspace_index(p)) {
            images[p] = bit(*i);
        } else {
            throw Error(Errc::invariant_violation, "no image given", "map." + y.name(p));
        }
    }
    return SetValuedMap(y, x, std::move(images));
}

Functional functional_from_json(const json& j, const FiniteTopSpace& space) {
    const auto& kind_j = member(j, "kind", "");
    if (!kind_j.is_string()) {
        fail_parse("kind must be a string", "kind");
    }
    const auto kind = kind_j.get<std::string>();
    const std::size_t n = space.size();
    if (kind == "support") {
        const bool is_min = j.value("min", true);
        const auto names = string_list(member(j, "F", ""), "F");
        return SupportFunctional(is_min ? Extremum::min : Extremum::max,
                                 space.mask_of(names, "F"), n)
            .functional();
    }
    if (kind == "density") {
        const auto& lam = member(j, "lambda", "");
        if (!lam.is_object()) {
            fail_parse("lambda must map points to weights", "lambda");
        }
        std::vector<double> values(n, -std::numeric_limits<double>::infinity());
        for (const auto& [key, value] : lam.items()) {
            const auto idx = space.index_of(key);
            if (!idx) {
                throw Error(Errc::invariant_violation, "unknown point '" + key + "'", "lambda");
            }
            if (value.is_null() || (value.is_string() && value.get<std::string>() == "-inf")) {
                continue;
            }
            values[*idx] = number(value, "lambda." + key);
        }
        return IdempotentDensity::from_reals(values).functional();
    }
    if (kind == "mean") {
        return arithmetic_mean(n);
    }
    if (kind == "dirac") {
        const auto& x = member(j, "x", "");
        if (!x.is_string()) {
            fail_parse("x must be a point identifier", "x");
        }
        const auto idx = space.index_of(x.get<std::string>());
        if (!idx) {
            throw Error(Errc::invariant_violation, "unknown point", "x");
        }
        return dirac(*idx, n);
    }
    if (kind == "table") {
        const auto& entries = member(j, "entries", "");
        if (!entries.is_array() || n > 16) {
            fail_parse("entries must be a list over at most 16 points", "entries");
        }
        std::vector<bool> truth(std::size_t{1} << n, false);
        std::vector<bool> given(truth.size(), false);
        for (const auto& e : entries) {
            const auto& f = member(e, "f", "entries");
            Mask s = 0;
            if (f.is_array() && !f.empty() && f.front().is_number()) {
                if (f.size() != n) {
                    fail_parse("0/1 vector must cover every point", "entries.f");
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double v = number(f[i], "entries.f");
                    if (v != 0.0 && v != 1.0) {
                        fail_parse("table inputs are two-valued", "entries.f");
                    }
                    if (v == 1.0) {
                        s |= bit(i);
                    }
                }
            } else {
                s = space.mask_of(string_list(f, "entries.f"), "entries.f");
            }
            const double value = number(member(e, "value", "entries"), "entries.value");
            if (value != 0.0 && value != 1.0) {
                throw Error(Errc::invariant_violation, "table values are 0 or 1", "entries.value");
            }
            truth[s] = value == 1.0;
            given[s] = true;
        }
        for (bool g : given) {
            if (!g) {
                throw Error(Errc::invariant_violation, "every two-valued input needs an entry",
                            "table.complete");
            }
        }
        return TableFunctional(n, std::move(truth)).functional();
    }
    throw Error(Errc::parse_error, "unknown functional kind '" + kind + "'", "kind");
}

RealFunction function_from_json(const json& j, const FiniteTopSpace& space) {
    RealFunction f(space.size(), 0.0);
    if (j.is_array()) {
        if (j.size() != space.size()) {
            fail_parse("function needs one value per point", "f");
        }
        for (std::size_t i = 0; i < j.size(); ++i) {
            f[i] = number(j[i], "f");
        }
        return f;
    }
    if (!j.is_object()) {
        fail_parse("function must be a list or point -> value object", "f");
    }
    std::vector<bool> seen(space.size(), false);
    for (const auto& [key, value] : j.items()) {
        const auto idx = space.index_of(key);
        if (!idx) {
            throw Error(Errc::invariant_violation, "unknown point '" + key + "'", "f");
        }
        f[*idx] = number(value, "f." + key);
        seen[*idx] = true;
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
        if (!seen[i]) {
            throw Error(Errc::invariant_violation, "missing value", "f." + space.name(i));
        }
    }
    return f;
}

Extremum extremum_from_json(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "min") {
            return Extremum::min;
        }
        if (s == "max") {
            return Extremum::max;
        }
    }
    fail_parse("kind must be \"min\" or \"max\"", "kind");
}

json to_json(const FiniteTopSpace& space) {
    json nbhd = json::object();
    for (std::size_t i = 0; i < space.size(); ++i) {
        nbhd[space.name(i)] = space.names_of(space.min_nbhd(i));
    }
    return json{{"points", space.points()}, {"min_nbhd", nbhd}};
}

json to_json(const MetricSpace& metric) {
    return json{{"points", metric.points()}, {"dist", metric.matrix()}};
}

json to_json(const SubspaceEmbedding& embedding) {
    return json{{"space", to_json(embedding.ambient())},
                {"subspace", embedding.ambient().names_of(embedding.subset())}};
}

json map_to_json(const SetValuedMap& r) {
    json out = json::object();
    for (std::size_t y = 0; y < r.domain().size(); ++y) {
        out[r.domain().name(y)] = r.codomain().names_of(r.image(y));
    }
    return out;
}

json function_to_json(std::span<const double> f, const FiniteTopSpace& space) {
    json out = json::object();
    for (std::size_t i = 0; i < space.size(); ++i) {
        out[space.name(i)] = f[i];
    }
    return out;
}

json subset_to_json(Mask set, const FiniteTopSpace& space) { return space.names_of(set); }

ParsedInstance parse_instance_json(const json& j) {
    if (!j.is_object()) {
        fail_parse("instance must be a JSON object", "");
    }
    try {
        if (j.contains("dist")) {
            return metric_from_json(j);
        }
        if (j.contains("map")) {
            return map_from_json(j.at("map"), embedding_from_json(j));
        }
        if (j.contains("kind")) {
            return functional_from_json(j, space_from_json(space_part(j)));
        }
        if (j.contains("subspace")) {
            return embedding_from_json(j);
        }
        return space_from_json(j);
    } catch (const json::exception& e) {
        throw Error(Errc::parse_error, e.what());
    }
}

ParsedInstance parse_instance(const std::filesystem::path& path) {
    return parse_instance_json(read_json_file(path));
}

InstanceBundle bundle_from_json(const json& j) {
    if (!j.is_object()) {
        fail_parse("instance must be a JSON object", "");
    }
    InstanceBundle b;
    try {
        const json& sp = space_part(j);
        if (sp.contains("points")) {
            b.space = space_from_json(sp);
        }
        if (j.contains("subspace")) {
            b.embedding = embedding_from_json(j);
        }
        if (j.contains("extender")) {
            const auto& ext = j.at("extender");
            if (!b.embedding) {
                fail_parse("extender needs a subspace", "extender");
            }
            b.map = map_from_json(member(member(ext, "from_retraction", "extender"), "map",
                                         "extender.from_retraction"),
                                  *b.embedding);
            b.kind = extremum_from_json(member(ext, "kind", "extender"));
        }
        if (j.contains("map")) {
            if (!b.embedding) {
                fail_parse("map needs a subspace", "map");
            }
            b.map = map_from_json(j.at("map"), *b.embedding);
        }
        if (j.contains("extremum")) {
            b.kind = extremum_from_json(j.at("extremum"));
        }
        const json* fj = j.contains("functional") ? &j.at("functional")
                         : j.contains("kind")     ? &j
                                                  : nullptr;
        if (fj) {
            if (!b.space) {
                fail_parse("functional needs a space", "points");
            }
            const FiniteTopSpace& on = b.embedding ? b.embedding->subspace() : *b.space;
            b.functional = functional_from_json(*fj, on);
        }
        if (j.contains("f")) {
            const FiniteTopSpace* on = b.embedding ? &b.embedding->subspace()
                                       : b.space   ? &*b.space
                                                   : nullptr;
            if (!on) {
                fail_parse("function needs a space", "f");
            }
            b.f = function_from_json(j.at("f"), *on);
        }
    } catch (const json::exception& e) {
        throw Error(Errc::parse_error, e.what());
    }
    return b;
}

} // namespace idemx
