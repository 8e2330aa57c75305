#include "lsm/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>

#include "lsm/errors.hpp"

namespace lsm {

namespace {

/// Rows of R holding both coordinates of the listed nodes.
Matrix hold_nodes(const std::vector<int>& nodes, Index n, int d)
{
    Matrix R = Matrix::Zero(static_cast<Index>(nodes.size()) * d, n * d);
    Index row = 0;
    for (int j : nodes)
        for (int k = 0; k < d; ++k)
            R(row++, d * j + k) = 1;
    return R;
}

void require_valid(const Problem& p)
{
    const RigidityReport r = validate_assumptions(p.lattice);
    if (!r.assumptions_hold())
        throw InvalidInput("generator: produced lattice fails the standing assumptions");
    p.loads.validate(p.lattice.constraints(), p.lattice.nodes() * p.lattice.d, p.lattice.d);
}

} // namespace

Matrix example1_reference_basis()
{
    Matrix v(10, 2);
    v << -0.247641312342202, 0.409252171336287,
         -0.247641312342202, 0.409252171336286,
         -0.404312022261124, -0.120407185624592,
         -0.404312022261124, -0.120407185624592,
         0.497928264380854, -0.079402340433155,
         0.497928264380854, -0.079402340433155,
         0.116775452487286, 0.394784775694451,
         0.116775452487287, 0.394784775694451,
         0.116775452487287, 0.394784775694451,
         0.116775452487286, 0.394784775694451;
    return v;
}

Problem build_example1(const Example1Options& opt)
{
    Problem p;
    LatticeDefinition& L = p.lattice;
    L.d = 2;
    L.incidence.resize(6, 10);
    L.incidence << 1, 0, 1, 0, 1, 0, 1, 0, 0, 0,
                   0, 1, -1, 0, 0, 1, 0, 1, 0, 0,
                   -1, 0, 0, 1, 0, -1, 0, 0, 1, 0,
                   0, -1, 0, -1, -1, 0, 0, 0, 0, 1,
                   0, 0, 0, 0, 0, 0, -1, -1, 0, 0,
                   0, 0, 0, 0, 0, 0, 0, 0, -1, -1;
    L.reference_coords.resize(12);
    L.reference_coords << 2, -1, 2, 1, 4, -1, 4, 1, 0, 0, 6, 0;
    L.stiffness = Vector::Ones(10);
    Vector ct(10);
    const double h = 1 / std::sqrt(2.0);
    ct << 1, 1, 1, 1, h, h, 10, 10, 10, 10;
    L.upper_limits = opt.c0 * ct;
    L.lower_limits = -opt.c0 * ct;
    L.constraint_matrix = hold_nodes({4, 5}, 6, 2);

    Vector rate = Vector::Zero(4);
    rate(2) = -opt.r0 * opt.c0;
    p.loads = constant_rate_schedule(Vector(-L.constraint_matrix * L.reference_coords), rate, 0.08);

    if (opt.prestressed) {
        Vector s(2);
        s << 1, -1;
        p.initial_stress = opt.c0 * L.stiffness.asDiagonal() * (example1_reference_basis() * s);
        p.label = "example1-prestressed";
    } else {
        p.initial_stress = Vector::Zero(10);
        p.label = "example1";
    }
    require_valid(p);
    return p;
}

Problem build_tri_grid_with_hole(const GridSpec& spec)
{
    if (spec.rows < 2 || spec.cols < 2)
        throw InvalidInput("grid: need at least two rows and two columns");
    const double dy = std::sqrt(3.0) / 2;
    std::vector<std::vector<int>> row_ids(static_cast<std::size_t>(spec.rows));
    std::vector<double> xs, ys;
    for (int r = 0; r < spec.rows; ++r) {
        const bool even = r % 2 == 0;
        const int len = even ? spec.cols - 1 : spec.cols;
        for (int i = 0; i < len; ++i) {
            row_ids[static_cast<std::size_t>(r)].push_back(static_cast<int>(xs.size()));
            xs.push_back(i + (even ? 0.5 : 0.0));
            ys.push_back(r * dy);
        }
    }
    const int total = static_cast<int>(xs.size());
    std::set<int> held(row_ids.front().begin(), row_ids.front().end());
    held.insert(row_ids.back().begin(), row_ids.back().end());

    std::set<int> hole;
    if (spec.hole_nodes) {
        for (int j : *spec.hole_nodes) {
            if (j < 0 || j >= total)
                throw InvalidInput("grid: hole node " + std::to_string(j) + " does not exist");
            if (held.count(j))
                throw InvalidInput("grid: hole node " + std::to_string(j) + " lies on a held row");
            hole.insert(j);
        }
    } else if (spec.hole_radius > 0) {
        const auto& mid = row_ids[static_cast<std::size_t>(spec.rows / 2)];
        const int centre = mid[mid.size() / 2];
        for (int j = 0; j < total; ++j)
            if (std::hypot(xs[j] - xs[centre], ys[j] - ys[centre]) <= spec.hole_radius * (1 + 1e-9)) {
                if (held.count(j))
                    throw InvalidInput("grid: hole reaches a held row");
                hole.insert(j);
            }
    }

    std::vector<int> new_id(static_cast<std::size_t>(total), -1);
    int n = 0;
    for (int j = 0; j < total; ++j)
        if (!hole.count(j))
            new_id[static_cast<std::size_t>(j)] = n++;

    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < total; ++a)
        for (int b = a + 1; b < total; ++b) {
            if (hole.count(a) || hole.count(b))
                continue;
            if (!spec.keep_fixed_springs && held.count(a) && held.count(b))
                continue;
            if (std::abs(std::hypot(xs[a] - xs[b], ys[a] - ys[b]) - 1) < 1e-9)
                edges.emplace_back(new_id[static_cast<std::size_t>(a)], new_id[static_cast<std::size_t>(b)]);
        }

    Problem p;
    LatticeDefinition& L = p.lattice;
    L.d = 2;
    const Index m = static_cast<Index>(edges.size());
    L.incidence = Matrix::Zero(n, m);
    for (Index i = 0; i < m; ++i) {
        L.incidence(edges[static_cast<std::size_t>(i)].first, i) = 1;
        L.incidence(edges[static_cast<std::size_t>(i)].second, i) = -1;
    }
    L.reference_coords.resize(2 * n);
    for (int j = 0; j < total; ++j) {
        const int k = new_id[static_cast<std::size_t>(j)];
        if (k >= 0) {
            L.reference_coords(2 * k) = xs[j];
            L.reference_coords(2 * k + 1) = ys[j];
        }
    }
    L.stiffness = Vector::Ones(m);
    L.upper_limits = Vector::Constant(m, spec.c0);
    L.lower_limits = Vector::Constant(m, -spec.c0);

    std::vector<int> held_new;
    std::vector<bool> is_top;
    for (int j : held) {
        held_new.push_back(new_id[static_cast<std::size_t>(j)]);
        is_top.push_back(ys[j] > 0);
    }
    L.constraint_matrix = hold_nodes(held_new, n, 2);
    Vector rate = Vector::Zero(L.constraint_matrix.rows());
    for (std::size_t k = 0; k < held_new.size(); ++k)
        if (is_top[k])
            rate(static_cast<Index>(2 * k + 1)) = -spec.pull_rate;
    p.loads = constant_rate_schedule(Vector(-L.constraint_matrix * L.reference_coords), rate, spec.horizon);
    p.initial_stress = Vector::Zero(m);
    p.label = "tri-grid-with-hole";
    require_valid(p);
    return p;
}

Problem build_periodic_tri(const PeriodicSpec& spec)
{
    if (spec.nx < 3 || spec.ny < 2 || spec.ny % 2 != 0)
        throw InvalidInput("periodic lattice: need nx >= 3 and an even ny >= 2");
    const double dy = std::sqrt(3.0) / 2;
    const int n = spec.nx * spec.ny;
    std::mt19937 rng(spec.seed);
    std::uniform_real_distribution<double> U(-spec.jitter, spec.jitter);

    Problem p;
    LatticeDefinition& L = p.lattice;
    L.d = 2;
    L.box.resize(2);
    L.box << spec.nx, spec.ny * dy;
    L.reference_coords.resize(2 * n);
    auto id = [&](int i, int j) { return j * spec.nx + i; };
    for (int j = 0; j < spec.ny; ++j)
        for (int i = 0; i < spec.nx; ++i) {
            L.reference_coords(2 * id(i, j)) = i + (j % 2 == 1 ? 0.5 : 0.0) + U(rng);
            L.reference_coords(2 * id(i, j) + 1) = j * dy + U(rng);
        }

    struct Bond {
        int a, b, sx, sy;
    };
    std::vector<Bond> bonds;
    for (int j = 0; j < spec.ny; ++j)
        for (int i = 0; i < spec.nx; ++i) {
            const int up = (j + 1) % spec.ny;
            const int sy = j + 1 == spec.ny ? 1 : 0;
            auto wrap = [&](int k, int& sx) {
                sx = k < 0 ? -1 : (k >= spec.nx ? 1 : 0);
                return (k + spec.nx) % spec.nx;
            };
            int sx;
            int k = wrap(i + 1, sx);
            bonds.push_back({id(i, j), id(k, j), sx, 0});
            const int left = j % 2 == 0 ? i - 1 : i;
            k = wrap(left, sx);
            bonds.push_back({id(i, j), id(k, up), sx, sy});
            k = wrap(left + 1, sx);
            bonds.push_back({id(i, j), id(k, up), sx, sy});
        }
    const Index m = static_cast<Index>(bonds.size());
    L.incidence = Matrix::Zero(n, m);
    L.edge_shift.resize(m, 2);
    for (Index e = 0; e < m; ++e) {
        const Bond& bd = bonds[static_cast<std::size_t>(e)];
        L.incidence(bd.a, e) = 1;
        L.incidence(bd.b, e) = -1;
        L.edge_shift(e, 0) = bd.sx;
        L.edge_shift(e, 1) = bd.sy;
    }
    L.stiffness = Vector::Ones(m);
    L.upper_limits = Vector::Constant(m, spec.c0);
    L.lower_limits = Vector::Constant(m, -spec.c0);
    L.constraint_matrix = hold_nodes({0}, n, 2);

    p.loads = constant_rate_schedule(Vector(-L.constraint_matrix * L.reference_coords), Vector::Zero(2),
                                     spec.horizon);
    p.loads.segments.front().box_strain_rate = spec.strain_rate;
    p.loads.box_axis = 0;
    p.initial_stress = Vector::Zero(m);
    p.label = "periodic-tri";
    require_valid(p);
    return p;
}

} // namespace lsm
