#ifndef FGLAB_JSON_IO_HPP
#define FGLAB_JSON_IO_HPP

#include "fglab/bp.hpp"
#include "fglab/dieudonne.hpp"
#include "fglab/fgl.hpp"

#include "json.hpp"

namespace fglab {

// Thrown on malformed input files; the CLI maps it to exit code 2.
struct MalformedInput : std::runtime_error {
  explicit MalformedInput(const std::string& what) : std::runtime_error(what) {}
};

nlohmann::json ring_to_json(const Ring& R);
Ring ring_from_json(const nlohmann::json& j);

nlohmann::json witt_to_json(const Witt& w);  // coords at the element's precision

// Modules serialize at their minimum effective precision: the emitted ring
// carries N = min_eff and every coordinate is reduced accordingly, so a
// reloaded module is exact at its stated precision.
nlohmann::json module_to_json(const DieudonneModule& M);
DieudonneModule module_from_json(const nlohmann::json& j);

nlohmann::json fgl_to_json(const Fgl& F);
Fgl fgl_from_json(const nlohmann::json& j);

nlohmann::json series_to_json(const Series& s);

nlohmann::json pseries_table_to_json(const std::vector<GradedPoly>& table);

// canonical dump: sorted keys (nlohmann maps are ordered), no whitespace games
std::string dump_canonical(const nlohmann::json& j);

} // namespace fglab

#endif
