#include "optdes/render.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include <Eigen/Cholesky>

#include "optdes/christoffel.hpp"

namespace optdes {

namespace {

struct Segment {
  double x0, y0, x1, y1;
};

/// Marching squares at `level` over a uniform grid of f.
std::vector<Segment> contour_segments(
    const std::function<double(double, double)>& f, double lo, double hi,
    int m, double level) {
  std::vector<std::vector<double>> grid(static_cast<size_t>(m),
                                        std::vector<double>(static_cast<size_t>(m)));
  const double h = (hi - lo) / (m - 1);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      grid[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          f(lo + i * h, lo + j * h) - level;
    }
  }
  auto interp = [](double a, double fa, double b, double fb) {
    const double t = fa / (fa - fb);
    return a + t * (b - a);
  };
  std::vector<Segment> segments;
  for (int i = 0; i + 1 < m; ++i) {
    for (int j = 0; j + 1 < m; ++j) {
      const double x0 = lo + i * h, x1 = x0 + h;
      const double y0 = lo + j * h, y1 = y0 + h;
      const double f00 = grid[i][j], f10 = grid[i + 1][j];
      const double f01 = grid[i][j + 1], f11 = grid[i + 1][j + 1];
      int code = 0;
      if (f00 > 0) code |= 1;
      if (f10 > 0) code |= 2;
      if (f11 > 0) code |= 4;
      if (f01 > 0) code |= 8;
      if (code == 0 || code == 15) continue;
      // Edge crossings: bottom (00-10), right (10-11), top (01-11),
      // left (00-01).
      const double bx = interp(x0, f00, x1, f10), by = y0;
      const double rx = x1, ry = interp(y0, f10, y1, f11);
      const double tx = interp(x0, f01, x1, f11), ty = y1;
      const double lx = x0, ly = interp(y0, f00, y1, f01);
      auto add = [&](double ax, double ay, double bx2, double by2) {
        segments.push_back({ax, ay, bx2, by2});
      };
      switch (code) {
        case 1: case 14: add(lx, ly, bx, by); break;
        case 2: case 13: add(bx, by, rx, ry); break;
        case 3: case 12: add(lx, ly, rx, ry); break;
        case 4: case 11: add(rx, ry, tx, ty); break;
        case 6: case 9: add(bx, by, tx, ty); break;
        case 7: case 8: add(lx, ly, tx, ty); break;
        case 5: case 10: {
          const double center = 0.25 * (f00 + f10 + f01 + f11);
          const bool flip = (center > 0) != (code == 5);
          if (flip) {
            add(lx, ly, bx, by);
            add(rx, ry, tx, ty);
          } else {
            add(lx, ly, tx, ty);
            add(bx, by, rx, ry);
          }
          break;
        }
        default: break;
      }
    }
  }
  return segments;
}

std::string svg_header(double w, double h) {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h
      << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return out.str();
}

std::string render_univariate(const SemiAlgebraicSet& X, const Design& design,
                              const MomentSequence& y_star, int d, int m) {
  const double R = X.ball_radius().value_or(1.0);
  const double lo = -1.1 * R, hi = 1.1 * R;
  const double contact = static_cast<double>(binomial(1 + d, 1));
  std::vector<double> xs(static_cast<size_t>(m)), ps(static_cast<size_t>(m));
  double pmax = contact;
  for (int i = 0; i < m; ++i) {
    const double x = lo + (hi - lo) * i / (m - 1);
    xs[static_cast<size_t>(i)] = x;
    const double v[] = {x};
    ps[static_cast<size_t>(i)] = christoffel_eval(y_star, d, v);
    pmax = std::max(pmax, ps[static_cast<size_t>(i)]);
  }
  const double W = 640, H = 420, pad = 40;
  auto sx = [&](double x) { return pad + (x - lo) / (hi - lo) * (W - 2 * pad); };
  auto sy = [&](double p) { return H - pad - p / (1.05 * pmax) * (H - 2 * pad); };
  std::ostringstream out;
  out << svg_header(W, H);
  out << "<line x1=\"" << sx(lo) << "\" y1=\"" << sy(contact) << "\" x2=\""
      << sx(hi) << "\" y2=\"" << sy(contact)
      << "\" stroke=\"#888\" stroke-dasharray=\"6 4\"/>\n";
  out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" "
         "points=\"";
  for (int i = 0; i < m; ++i) {
    out << sx(xs[static_cast<size_t>(i)]) << ","
        << sy(std::min(ps[static_cast<size_t>(i)], 1.05 * pmax)) << " ";
  }
  out << "\"/>\n";
  for (const Eigen::VectorXd& a : design.atoms) {
    out << "<circle cx=\"" << sx(a[0]) << "\" cy=\"" << sy(contact)
        << "\" r=\"4\" fill=\"red\"/>\n";
  }
  out << "<text x=\"" << pad << "\" y=\"" << (pad / 2.0)
      << "\" font-size=\"12\">christoffel polynomial, contact level "
      << contact << ", " << design.size() << " atoms</text>\n";
  out << "</svg>\n";
  return out.str();
}

std::string render_planar(const SemiAlgebraicSet& X, const Design& design,
                          const MomentSequence& y_star, int d, int m) {
  const double R = X.ball_radius().value_or(1.0);
  const double lo = -1.15 * R, hi = 1.15 * R;
  const double contact = static_cast<double>(binomial(2 + d, 2));
  const MomentMatrix M = moment_matrix(y_star, d);
  Eigen::LLT<Eigen::MatrixXd> llt(M.entries);
  if (llt.info() != Eigen::Success) {
    throw SingularMomentMatrix("render: M_d(y) not positive definite");
  }
  const Eigen::MatrixXd L = llt.matrixL();
  const MonomialBasis& basis = shared_basis(2, d);
  auto christoffel = [&](double x1, double x2) {
    const double v[] = {x1, x2};
    const Eigen::VectorXd vd = basis.eval(v);
    return L.triangularView<Eigen::Lower>().solve(vd).squaredNorm();
  };
  auto boundary = [&](double x1, double x2) {
    const double v[] = {x1, x2};
    double worst = std::numeric_limits<double>::infinity();
    for (const Constraint& c : X.constraints()) worst = std::min(worst, c.g(v));
    return worst;
  };
  const double W = 560, H = 560, pad = 30;
  auto sx = [&](double x) { return pad + (x - lo) / (hi - lo) * (W - 2 * pad); };
  auto sy = [&](double y) { return H - pad - (y - lo) / (hi - lo) * (H - 2 * pad); };
  std::ostringstream out;
  out << svg_header(W, H);
  auto draw = [&](const std::vector<Segment>& segments, const char* style) {
    for (const Segment& s : segments) {
      out << "<line x1=\"" << sx(s.x0) << "\" y1=\"" << sy(s.y0) << "\" x2=\""
          << sx(s.x1) << "\" y2=\"" << sy(s.y1) << "\" " << style << "/>\n";
    }
  };
  draw(contour_segments(boundary, lo, hi, m, 0.0),
       "stroke=\"black\" stroke-width=\"2\"");
  draw(contour_segments(christoffel, lo, hi, m, contact),
       "stroke=\"#1f77b4\" stroke-width=\"1\"");
  for (const Eigen::VectorXd& a : design.atoms) {
    out << "<circle cx=\"" << sx(a[0]) << "\" cy=\"" << sy(a[1])
        << "\" r=\"4\" fill=\"red\"/>\n";
  }
  out << "<text x=\"" << pad << "\" y=\"" << (pad / 2.0 + 6)
      << "\" font-size=\"12\">design space (black), christoffel level "
      << contact << " (blue), " << design.size() << " atoms (red)</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace

std::string render_design_svg(const SemiAlgebraicSet& X, const Design& design,
                              const MomentSequence& y_star, int d,
                              int grid_points) {
  const int m = std::max(16, grid_points);
  if (X.dim() == 1) return render_univariate(X, design, y_star, d, m);
  if (X.dim() == 2) return render_planar(X, design, y_star, d, m);
  throw UnsupportedDimension("SVG rendering supports n <= 2");
}

std::string atoms_csv(const Design& design) {
  std::ostringstream out;
  const int n = design.dim();
  for (int i = 0; i < n; ++i) out << "x" << (i + 1) << ",";
  out << "weight\n";
  out.precision(17);
  for (int i = 0; i < design.size(); ++i) {
    for (int k = 0; k < n; ++k) out << design.atoms[static_cast<size_t>(i)][k] << ",";
    out << design.weights[i] << "\n";
  }
  return out.str();
}

}  // namespace optdes
