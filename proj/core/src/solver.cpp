#include "iontrap/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>

#include "iontrap/error.hpp"

namespace iontrap::laplace {

namespace {

constexpr double kInRectEps = 1e-9;  // fraction of a spacing, rect inclusion slop

// index range covering [lo, hi] on the axis t0 + i*h, closed with slop
int lo_index(double t, double t0, double h, int n) {
    const int i = static_cast<int>(std::ceil((t - t0) / h - kInRectEps));
    return std::clamp(i, 0, n);
}

int hi_index(double t, double t0, double h, int n) {
    const int i = static_cast<int>(std::floor((t - t0) / h + kInRectEps));
    return std::clamp(i, -1, n - 1);
}

// unified 2-D/3-D node storage; 2-D runs with nz == 1 and the z terms off
struct Dims {
    int nx = 1, ny = 1, nz = 1;
    double hx = 0.0, hy = 0.0, hz = 0.0;

    std::size_t idx(int i, int j, int k) const {
        return (static_cast<std::size_t>(k) * ny + j) * nx + i;
    }
    std::size_t size() const { return static_cast<std::size_t>(nx) * ny * nz; }
    int extent(int axis) const { return axis == 0 ? nx : axis == 1 ? ny : nz; }
};

enum class Mirror : std::uint8_t { None, Even, Odd };

// Mirror symmetry of the rasterized Dirichlet data about the center plane of
// one axis, detected on the mask and fixed values themselves so that folding
// can never disagree with what was actually rasterized. Comparisons are
// exact: layouts built from +-(same expression) mirror bit-for-bit, and
// anything less simply solves unfolded.
Mirror detect_mirror(const Dims& d, const std::vector<double>& v,
                     const std::vector<NodeKind>& m, int axis) {
    const int n = d.extent(axis);
    if (n < 3) return Mirror::None;
    const int c = (n - 1) / 2;
    bool even_ok = true, odd_ok = true;
    for (int k = 0; k < d.nz; ++k) {
        for (int j = 0; j < d.ny; ++j) {
            for (int i = 0; i < d.nx; ++i) {
                const int t = axis == 0 ? i : axis == 1 ? j : k;
                if (t > c) continue;
                int mi = i, mj = j, mk = k;
                (axis == 0 ? mi : axis == 1 ? mj : mk) = 2 * c - t;
                const std::size_t p = d.idx(i, j, k);
                const std::size_t q = d.idx(mi, mj, mk);
                if (m[p] != m[q]) return Mirror::None;
                if (m[p] != NodeKind::Interior) {
                    // a plane node (p == q) fails the odd test unless it is 0
                    if (v[p] != v[q]) even_ok = false;
                    if (v[p] != -v[q]) odd_ok = false;
                    if (!even_ok && !odd_ok) return Mirror::None;
                }
            }
        }
    }
    // both hold only when every fixed value is 0; either fold is then exact
    if (odd_ok) return Mirror::Odd;
    if (even_ok) return Mirror::Even;
    return Mirror::None;
}

struct Folded {
    Dims d;
    std::vector<double> v;
    std::vector<NodeKind> m;
};

// Keep the upper half along each mirrored axis (folded index f maps to full
// index c + f). Odd planes become Dirichlet 0; even planes stay unknowns and
// the sweep kernel reflects their missing neighbor.
Folded fold_domain(const Dims& full, const std::vector<double>& v,
                   const std::vector<NodeKind>& m, const std::array<Mirror, 3>& kind) {
    Folded out;
    out.d = full;
    std::array<int, 3> off{0, 0, 0};
    auto shrink = [&](int axis, int& n) {
        if (kind[axis] != Mirror::None) {
            off[axis] = (n - 1) / 2;
            n = (n - 1) / 2 + 1;
        }
    };
    shrink(0, out.d.nx);
    shrink(1, out.d.ny);
    shrink(2, out.d.nz);
    out.v.resize(out.d.size());
    out.m.resize(out.d.size());
    for (int k = 0; k < out.d.nz; ++k) {
        for (int j = 0; j < out.d.ny; ++j) {
            for (int i = 0; i < out.d.nx; ++i) {
                const std::size_t p = full.idx(off[0] + i, off[1] + j, off[2] + k);
                const std::size_t q = out.d.idx(i, j, k);
                out.v[q] = v[p];
                out.m[q] = m[p];
            }
        }
    }
    auto pin_plane = [&](int axis) {
        if (kind[axis] != Mirror::Odd) return;
        const int ni = axis == 0 ? 1 : out.d.nx;
        const int nj = axis == 1 ? 1 : out.d.ny;
        const int nk = axis == 2 ? 1 : out.d.nz;
        for (int k = 0; k < nk; ++k) {
            for (int j = 0; j < nj; ++j) {
                for (int i = 0; i < ni; ++i) {
                    const std::size_t p = out.d.idx(i, j, k);
                    if (out.m[p] == NodeKind::Interior) {
                        out.m[p] = NodeKind::Boundary;
                        out.v[p] = 0.0;
                    }
                }
            }
        }
    };
    pin_plane(0);
    pin_plane(1);
    pin_plane(2);
    return out;
}

struct RobinNode {
    std::size_t p, q;  // v[p] = ratio * v[q]
    double ratio;
};

// Outer box faces slaved to a V ~ A/r tail along each node's radial ray:
// every Boundary node copies its inward neighbor scaled by r_in/r_node.
// Exact for the monopole term of a compact charged assembly, which is the
// leading box-size error of a grounded box; the residual error decays with
// the next multipole. Odd-fold mirror planes are index 0 of a folded axis
// and stay pinned; nodes whose inward neighbor is an electrode (layouts
// clipped by the box) stay grounded as well.
std::vector<RobinNode> open_boundary_nodes(const Dims& d, const std::vector<NodeKind>& m,
                                           const std::array<Mirror, 3>& kind) {
    std::vector<RobinNode> out;
    const bool folded[3] = {kind[0] != Mirror::None, kind[1] != Mirror::None,
                            kind[2] != Mirror::None};
    auto coord = [&](int axis, int t) {
        const double h = axis == 0 ? d.hx : axis == 1 ? d.hy : d.hz;
        return folded[axis] ? t * h : (t - (d.extent(axis) - 1) / 2) * h;
    };
    for (int k = 0; k < d.nz; ++k) {
        for (int j = 0; j < d.ny; ++j) {
            for (int i = 0; i < d.nx; ++i) {
                int di = 0, dj = 0, dk = 0;
                if (i == d.nx - 1) di = -1;
                else if (i == 0 && !folded[0]) di = 1;
                if (j == d.ny - 1) dj = -1;
                else if (j == 0 && !folded[1]) dj = 1;
                if (k == d.nz - 1 && d.nz > 1) dk = -1;
                else if (k == 0 && d.nz > 1 && !folded[2]) dk = 1;
                if (di == 0 && dj == 0 && dk == 0) continue;
                const std::size_t p = d.idx(i, j, k);
                if (m[p] != NodeKind::Boundary) continue;
                const std::size_t q = d.idx(i + di, j + dj, k + dk);
                if (m[q] == NodeKind::Electrode) continue;
                const double xb = coord(0, i), yb = coord(1, j), zb = coord(2, k);
                const double xq = coord(0, i + di), yq = coord(1, j + dj),
                             zq = coord(2, k + dk);
                const double rb = std::sqrt(xb * xb + yb * yb + zb * zb);
                const double rq = std::sqrt(xq * xq + yq * yq + zq * zq);
                if (!(rb > 0.0) || !(rq > 0.0)) continue;
                out.push_back({p, q, rq / rb});
            }
        }
    }
    return out;
}

// Jacobi spectral-radius estimate on the full grid; the folded problems see
// a subset of that spectrum, so the resulting omega stays below optimal+eps
// and always below 2.
double estimate_omega(const Dims& d) {
    const double cx = 1.0 / (d.hx * d.hx);
    const double cy = 1.0 / (d.hy * d.hy);
    const double cz = d.nz > 1 ? 1.0 / (d.hz * d.hz) : 0.0;
    const double pi = 3.14159265358979323846;
    double num = cx * std::cos(pi / (d.nx - 1)) + cy * std::cos(pi / (d.ny - 1));
    if (d.nz > 1) num += cz * std::cos(pi / (d.nz - 1));
    const double rho = num / (cx + cy + cz);
    const double omega = 2.0 / (1.0 + std::sqrt(std::max(1.0 - rho * rho, 0.0)));
    return std::min(omega, 1.995);
}

// One red-black SOR sweep. Dirichlet nodes are skipped via the mask; an
// Interior node at index 0 of an axis can only be an even-fold plane, whose
// lower neighbor reflects to index 1. Upper axis ends are always Dirichlet
// (outer box), so the +1 reads never leave the array.
void sor_sweep(const Dims& d, std::vector<double>& v, const std::vector<NodeKind>& m,
               double omega) {
    const double cx = 1.0 / (d.hx * d.hx);
    const double cy = 1.0 / (d.hy * d.hy);
    const double cz = d.nz > 1 ? 1.0 / (d.hz * d.hz) : 0.0;
    const double inv_denom = 1.0 / (2.0 * (cx + cy + cz));
    const std::size_t plane = static_cast<std::size_t>(d.nx) * d.ny;
    const bool threed = d.nz > 1;
    for (int color = 0; color < 2; ++color) {
        for (int k = 0; k < d.nz; ++k) {
            for (int j = 0; j < d.ny; ++j) {
                const std::size_t row = d.idx(0, j, k);
                for (int i = (color + j + k) & 1; i < d.nx; i += 2) {
                    const std::size_t p = row + i;
                    if (m[p] != NodeKind::Interior) continue;
                    const double vw = (i == 0) ? v[p + 1] : v[p - 1];
                    const double ve = v[p + 1];
                    const double vs = (j == 0) ? v[p + d.nx] : v[p - d.nx];
                    const double vn = v[p + d.nx];
                    double sum = cx * (vw + ve) + cy * (vs + vn);
                    if (threed) {
                        const double vd = (k == 0) ? v[p + plane] : v[p - plane];
                        sum += cz * (vd + v[p + plane]);
                    }
                    const double gs = sum * inv_denom;
                    v[p] += omega * (gs - v[p]);
                }
            }
        }
    }
}

// max |gs - v| over interior nodes: the Gauss-Seidel correction, which is
// the discrete Laplace residual scaled by h^2/(2 sum c)
double residual_pass(const Dims& d, const std::vector<double>& v,
                     const std::vector<NodeKind>& m) {
    const double cx = 1.0 / (d.hx * d.hx);
    const double cy = 1.0 / (d.hy * d.hy);
    const double cz = d.nz > 1 ? 1.0 / (d.hz * d.hz) : 0.0;
    const double inv_denom = 1.0 / (2.0 * (cx + cy + cz));
    const std::size_t plane = static_cast<std::size_t>(d.nx) * d.ny;
    const bool threed = d.nz > 1;
    double worst = 0.0;
    for (int k = 0; k < d.nz; ++k) {
        for (int j = 0; j < d.ny; ++j) {
            const std::size_t row = d.idx(0, j, k);
            for (int i = 0; i < d.nx; ++i) {
                const std::size_t p = row + i;
                if (m[p] != NodeKind::Interior) continue;
                const double vw = (i == 0) ? v[p + 1] : v[p - 1];
                const double vs = (j == 0) ? v[p + d.nx] : v[p - d.nx];
                double sum = cx * (vw + v[p + 1]) + cy * (vs + v[p + d.nx]);
                if (threed) {
                    const double vd = (k == 0) ? v[p + plane] : v[p - plane];
                    sum += cz * (vd + v[p + plane]);
                }
                worst = std::max(worst, std::abs(sum * inv_denom - v[p]));
            }
        }
    }
    return worst;
}

void run_sor(const Dims& d, std::vector<double>& v, const std::vector<NodeKind>& m,
             const SolverOptions& opts, double v_scale, double omega,
             const std::vector<RobinNode>& robin, SolveStats& st) {
    if (opts.tol <= 0.0 || opts.check_interval < 1 || opts.max_sweeps < 1) {
        throw Error(ErrorCode::InvalidInput, "solver tolerance, check interval and sweep "
                                             "budget must be positive");
    }
    const double tol_abs = opts.tol * (v_scale > 0.0 ? v_scale : 1.0);
    st.omega = omega;
    long sweeps = 0;
    double res = 0.0;
    while (sweeps < opts.max_sweeps) {
        const long burst =
            std::min<long>(opts.check_interval, opts.max_sweeps - sweeps);
        for (long s = 0; s < burst; ++s) {
            sor_sweep(d, v, m, omega);
            for (const RobinNode& n : robin) v[n.p] = n.ratio * v[n.q];
        }
        sweeps += burst;
        res = residual_pass(d, v, m);
        if (res < tol_abs) {
            st.sweeps = sweeps;
            st.residual = res;
            return;
        }
    }
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "SOR stalled at scaled residual %.3e V (tolerance %.3e V) after %ld sweeps",
                  res, tol_abs, sweeps);
    throw Error(ErrorCode::NoConvergence, msg);
}

void check_resolution(double hy, double min_feature) {
    if (min_feature > 0.0 && hy > min_feature / 3.0 * (1.0 + 1e-12)) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "hy = %.4g um cannot place four nodes across the smallest y "
                      "feature (%.4g um); need hy <= %.4g um",
                      hy * 1e6, min_feature * 1e6, min_feature / 3.0 * 1e6);
        throw Error(ErrorCode::GridTooCoarse, msg);
    }
}

// stencil-adjacent electrode nodes at different potentials mean the vacuum
// gap between them vanished at this resolution
void check_gaps(const Dims& d, const std::vector<double>& v,
                const std::vector<NodeKind>& m) {
    const std::size_t plane = static_cast<std::size_t>(d.nx) * d.ny;
    for (int k = 0; k < d.nz; ++k) {
        for (int j = 0; j < d.ny; ++j) {
            for (int i = 0; i < d.nx; ++i) {
                const std::size_t p = d.idx(i, j, k);
                if (m[p] != NodeKind::Electrode) continue;
                const bool bad =
                    (i + 1 < d.nx && m[p + 1] == NodeKind::Electrode && v[p + 1] != v[p]) ||
                    (j + 1 < d.ny && m[p + d.nx] == NodeKind::Electrode &&
                     v[p + d.nx] != v[p]) ||
                    (k + 1 < d.nz && m[p + plane] == NodeKind::Electrode &&
                     v[p + plane] != v[p]);
                if (bad) {
                    throw Error(ErrorCode::GapTooSmallForGrid,
                                "electrodes at different potentials touch on the grid; "
                                "refine the spacing or widen the gap");
                }
            }
        }
    }
}

void solve_with_folding(const Dims& full, std::vector<double>& v,
                        std::vector<NodeKind>& m, const SolverOptions& opts,
                        double v_scale, SolveStats* stats) {
    std::array<Mirror, 3> kind{Mirror::None, Mirror::None, Mirror::None};
    if (opts.exploit_symmetry) {
        kind[0] = detect_mirror(full, v, m, 0);
        kind[1] = detect_mirror(full, v, m, 1);
        if (full.nz > 1) kind[2] = detect_mirror(full, v, m, 2);
    }
    const double omega = opts.omega > 0.0 ? opts.omega : estimate_omega(full);
    if (omega <= 0.0 || omega >= 2.0) {
        throw Error(ErrorCode::InvalidInput, "SOR relaxation factor must lie in (0, 2)");
    }
    SolveStats st;
    st.folded = {kind[0] != Mirror::None, kind[1] != Mirror::None,
                 kind[2] != Mirror::None};
    const bool open = opts.open_boundary && full.nz > 1;

    if (kind[0] == Mirror::None && kind[1] == Mirror::None && kind[2] == Mirror::None) {
        const auto robin = open ? open_boundary_nodes(full, m, kind)
                                : std::vector<RobinNode>{};
        run_sor(full, v, m, opts, v_scale, omega, robin, st);
        if (stats) *stats = st;
        return;
    }

    Folded fd = fold_domain(full, v, m, kind);
    const auto robin = open ? open_boundary_nodes(fd.d, fd.m, kind)
                            : std::vector<RobinNode>{};
    run_sor(fd.d, fd.v, fd.m, opts, v_scale, omega, robin, st);

    const int cx = (full.nx - 1) / 2, cy = (full.ny - 1) / 2, cz = (full.nz - 1) / 2;
    for (int k = 0; k < full.nz; ++k) {
        const int fk = kind[2] == Mirror::None ? k : std::abs(k - cz);
        const double sk = (kind[2] == Mirror::Odd && k < cz) ? -1.0 : 1.0;
        for (int j = 0; j < full.ny; ++j) {
            const int fj = kind[1] == Mirror::None ? j : std::abs(j - cy);
            const double sj = (kind[1] == Mirror::Odd && j < cy) ? -sk : sk;
            for (int i = 0; i < full.nx; ++i) {
                const int fi = kind[0] == Mirror::None ? i : std::abs(i - cx);
                const double si = (kind[0] == Mirror::Odd && i < cx) ? -sj : sj;
                v[full.idx(i, j, k)] = si * fd.v[fd.d.idx(fi, fj, fk)];
            }
        }
    }
    if (stats) *stats = st;
}

} // namespace

ScalarField2D solve_laplace_2d(const ElectrodeLayout2D& layout, const GridSpec2D& spec,
                               const SolverOptions& opts, SolveStats* stats) {
    check_resolution(spec.hy, layout.min_resolve_y);
    ScalarField2D f;
    f.grid = Grid2D::centered(spec.half_x, spec.half_y, spec.hx, spec.hy);
    const Grid2D& g = f.grid;
    f.values.assign(g.size(), 0.0);
    f.mask.assign(g.size(), NodeKind::Interior);

    for (int i = 0; i < g.nx; ++i) {
        f.mask[g.idx(i, 0)] = NodeKind::Boundary;
        f.mask[g.idx(i, g.ny - 1)] = NodeKind::Boundary;
    }
    for (int j = 0; j < g.ny; ++j) {
        f.mask[g.idx(0, j)] = NodeKind::Boundary;
        f.mask[g.idx(g.nx - 1, j)] = NodeKind::Boundary;
    }
    for (const Rect2D& r : layout.rects) {
        const int i_lo = lo_index(r.x_lo, g.x0, g.hx, g.nx);
        const int i_hi = hi_index(r.x_hi, g.x0, g.hx, g.nx);
        int j_lo, j_hi;
        if (r.y_lo == r.y_hi) {
            // thin electrode: one node row, placed symmetrically about center
            const int j = g.cj() + static_cast<int>(std::lround(r.y_lo / g.hy));
            if (j < 0 || j >= g.ny) continue;
            j_lo = j_hi = j;
        } else {
            j_lo = lo_index(r.y_lo, g.y0, g.hy, g.ny);
            j_hi = hi_index(r.y_hi, g.y0, g.hy, g.ny);
        }
        for (int j = j_lo; j <= j_hi; ++j) {
            for (int i = i_lo; i <= i_hi; ++i) {
                const std::size_t p = g.idx(i, j);
                f.mask[p] = NodeKind::Electrode;
                f.values[p] = r.volts;
            }
        }
    }

    Dims d;
    d.nx = g.nx;
    d.ny = g.ny;
    d.nz = 1;
    d.hx = g.hx;
    d.hy = g.hy;
    check_gaps(d, f.values, f.mask);
    solve_with_folding(d, f.values, f.mask, opts, layout.v_scale, stats);
    return f;
}

ScalarField3D solve_laplace_3d(const ElectrodeLayout3D& layout, const GridSpec3D& spec,
                               const SolverOptions& opts, SolveStats* stats) {
    check_resolution(spec.hy, layout.min_resolve_y);
    ScalarField3D f;
    f.grid = Grid3D::centered(spec.half_x, spec.half_y, spec.half_z, spec.hx, spec.hy,
                              spec.hz);
    const Grid3D& g = f.grid;
    f.values.assign(g.size(), 0.0);
    f.mask.assign(g.size(), NodeKind::Interior);

    for (int k = 0; k < g.nz; ++k) {
        for (int j = 0; j < g.ny; ++j) {
            f.mask[g.idx(0, j, k)] = NodeKind::Boundary;
            f.mask[g.idx(g.nx - 1, j, k)] = NodeKind::Boundary;
        }
        for (int i = 0; i < g.nx; ++i) {
            f.mask[g.idx(i, 0, k)] = NodeKind::Boundary;
            f.mask[g.idx(i, g.ny - 1, k)] = NodeKind::Boundary;
        }
    }
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            f.mask[g.idx(i, j, 0)] = NodeKind::Boundary;
            f.mask[g.idx(i, j, g.nz - 1)] = NodeKind::Boundary;
        }
    }
    for (const Box3D& bx : layout.boxes) {
        const int i_lo = lo_index(bx.x_lo, g.x0, g.hx, g.nx);
        const int i_hi = hi_index(bx.x_hi, g.x0, g.hx, g.nx);
        const int j_lo = lo_index(bx.y_lo, g.y0, g.hy, g.ny);
        const int j_hi = hi_index(bx.y_hi, g.y0, g.hy, g.ny);
        const int k_lo = lo_index(bx.z_lo, g.z0, g.hz, g.nz);
        const int k_hi = hi_index(bx.z_hi, g.z0, g.hz, g.nz);
        for (int k = k_lo; k <= k_hi; ++k) {
            for (int j = j_lo; j <= j_hi; ++j) {
                for (int i = i_lo; i <= i_hi; ++i) {
                    const std::size_t p = g.idx(i, j, k);
                    f.mask[p] = NodeKind::Electrode;
                    f.values[p] = bx.volts;
                }
            }
        }
    }

    Dims d;
    d.nx = g.nx;
    d.ny = g.ny;
    d.nz = g.nz;
    d.hx = g.hx;
    d.hy = g.hy;
    d.hz = g.hz;
    check_gaps(d, f.values, f.mask);
    solve_with_folding(d, f.values, f.mask, opts, layout.v_scale, stats);
    return f;
}

} // namespace iontrap::laplace
