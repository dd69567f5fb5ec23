#ifndef OPTDES_GALLERY_HPP
#define OPTDES_GALLERY_HPP

#include <optional>
#include <string_view>

#include "optdes/pipeline.hpp"

namespace optdes {

/// Degree-d polynomial regression on the interval [-1, 1].
DesignProblem interval_problem(int d = 5, int delta = 0);

/// Wynn's polygon with vertices (-1,-1), (-1,1), (1,-1), (2,2) scaled into
/// the unit circle; the redundant ball constraint supplies the compactness
/// certificate.
DesignProblem wynn_polygon_problem(int d = 1, int delta = 3);

/// The unit sphere in R^3, encoded as the equality pair 1 - |x|^2 = 0;
/// sampling pushes ball draws onto the sphere.
DesignProblem sphere_problem(int d = 1, int delta = 0);

/// Lookup by name ("interval", "polygon", "sphere"); d and delta override
/// the per-example defaults when given.
std::optional<DesignProblem> gallery_problem(std::string_view name,
                                             std::optional<int> d = {},
                                             std::optional<int> delta = {});

/// Exact vertices of the scaled polygon, from the active constraint pairs.
std::vector<Eigen::Vector2d> wynn_polygon_vertices();

}  // namespace optdes

#endif  // OPTDES_GALLERY_HPP
