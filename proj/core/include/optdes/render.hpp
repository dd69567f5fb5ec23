#ifndef OPTDES_RENDER_HPP
#define OPTDES_RENDER_HPP

#include <string>

#include "optdes/design.hpp"
#include "optdes/moments.hpp"
#include "optdes/semialgebraic.hpp"

namespace optdes {

/// SVG picture of the design space, the recovered atoms, and the level set
/// {p_d = binom(n+d, n)} of the Christoffel polynomial. n = 1 draws the
/// graph of p_d with the contact level; n = 2 draws contours. Throws
/// UnsupportedDimension for n >= 3 (use the CSV atom table there).
std::string render_design_svg(const SemiAlgebraicSet& X, const Design& design,
                              const MomentSequence& y_star, int d,
                              int grid_points = 201);

/// CSV table of atoms and weights (one row per atom).
std::string atoms_csv(const Design& design);

}  // namespace optdes

#endif  // OPTDES_RENDER_HPP
