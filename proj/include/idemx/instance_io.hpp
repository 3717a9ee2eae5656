#ifndef IDEMX_INSTANCE_IO_HPP
#define IDEMX_INSTANCE_IO_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "idemx/extenders.hpp"
#include "idemx/functionals.hpp"
#include "idemx/setmaps.hpp"
#include "idemx/spaces.hpp"

namespace idemx {

using json = nlohmann::json;

// Instance schemas (all point references are identifiers):
//   space      {"points":[...], "min_nbhd":{"p":["p","w"],...}}   min_nbhd optional
//   metric     {"points":[...], "dist":[[...],...]}
//   embedding  {"space":{...}, "subspace":[...]}
//   map        embedding keys + {"map":{"w":["p","q"],...}}; points of X may be omitted
//   functional {"points":[...], "kind":"support", "min":true, "F":[...]}
//              {"points":[...], "kind":"density", "lambda":{"a":0,"b":-1}}  missing/null = -inf
//              {"points":[...], "kind":"mean"} | {"kind":"dirac","x":"a"}
//              {"points":[...], "kind":"table", "entries":[{"f":["a"],"value":1},...]}
//   extender   {"from_retraction":{"map":{...}}, "kind":"min"} next to embedding keys

FiniteTopSpace space_from_json(const json& j);
MetricSpace metric_from_json(const json& j);
SubspaceEmbedding embedding_from_json(const json& j);
SetValuedMap map_from_json(const json& map, const SubspaceEmbedding& embedding);
/// `space` supplies the point names.
Functional functional_from_json(const json& j, const FiniteTopSpace& space);
RealFunction function_from_json(const json& j, const FiniteTopSpace& space);
Extremum extremum_from_json(const json& j);

json to_json(const FiniteTopSpace& space);
json to_json(const MetricSpace& metric);
json to_json(const SubspaceEmbedding& embedding);
/// Just the {"w":[...]} mapping, keyed by domain names.
json map_to_json(const SetValuedMap& r);
json function_to_json(std::span<const double> f, const FiniteTopSpace& space);
json subset_to_json(Mask set, const FiniteTopSpace& space);

using ParsedInstance =
    std::variant<FiniteTopSpace, MetricSpace, SetValuedMap, Functional, SubspaceEmbedding>;

/// Parses by shape: "dist" -> metric, "map" -> set-valued map, "kind" ->
/// functional, "subspace" -> embedding, otherwise a space. Throws ParseError
/// for malformed JSON, InvariantViolation(field) for invariant failures,
/// IoError for unreadable files.
ParsedInstance parse_instance(const std::filesystem::path& path);
ParsedInstance parse_instance_json(const json& j);

json read_json_file(const std::filesystem::path& path);

/// Everything a CLI subcommand may need from one instance file.
struct InstanceBundle {
    std::optional<FiniteTopSpace> space;
    std::optional<SubspaceEmbedding> embedding;
    std::optional<SetValuedMap> map;
    std::optional<Functional> functional;
    std::optional<RealFunction> f;
    std::optional<Extremum> kind;
};

/// Recognised keys: "space" (or top-level points/min_nbhd), "subspace",
/// "map", "functional" (or top-level "kind"), "f", "extremum".
InstanceBundle bundle_from_json(const json& j);

} // namespace idemx

#endif // IDEMX_INSTANCE_IO_HPP
