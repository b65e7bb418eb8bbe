#pragma once

#include <string>
#include <vector>

#include "dmspec/ids.hpp"
#include "dmspec/spectrum.hpp"

namespace dmspec::io {

/// One horizontal row of bands per period (all orbits of that period overlaid),
/// with the merged union as the bottom row. SVG 1.1, no timestamp.
std::string band_diagram_svg(const std::vector<OrbitBands>& per_orbit,
                             const SpectrumApprox& merged);

/// k(E) as a polyline staircase; bands of `shading` drawn underneath if given.
std::string ids_staircase_svg(const IdsTable& table, const SpectrumApprox* shading = nullptr);

}  // namespace dmspec::io
