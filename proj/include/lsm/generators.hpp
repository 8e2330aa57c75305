#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lsm/lattice.hpp"
#include "lsm/loads.hpp"

namespace lsm {

/// Lattice, load program and initial stress of one run.
struct Problem {
    LatticeDefinition lattice;
    LoadSchedule loads;
    Vector initial_stress; ///< m, zero when absent
    std::string label;
};

struct Example1Options {
    double c0 = 1e-3;
    double r0 = 100; ///< drive rate of node 6 is r0 * c0 along -x in r, i.e. +x for the node
    bool prestressed = false;
};

/// Six nodes, ten springs, nodes 5 and 6 held; node 6 pulled along x.
[[nodiscard]] Problem build_example1(const Example1Options& opt = {});

/// A fixed 10x2 self-stress basis of the toy lattice, used to build the prestress.
[[nodiscard]] Matrix example1_reference_basis();

struct GridSpec {
    int rows = 15;
    int cols = 15; ///< odd rows hold cols nodes, even rows cols - 1 shifted by half a spacing
    std::optional<std::vector<int>> hole_nodes; ///< grid node ids (row-major); default hexagon
    double hole_radius = 2;                     ///< default hole: nodes within this distance of the centre
    bool keep_fixed_springs = false;            ///< keep springs joining two held nodes
    double c0 = 1e-3;
    double pull_rate = 0.1; ///< upward speed of the top row
    double horizon = 0.2;
};

/// Triangular grid with a hole; bottom and top rows held, top row pulled upward.
[[nodiscard]] Problem build_tri_grid_with_hole(const GridSpec& spec = {});

struct PeriodicSpec {
    int nx = 4;
    int ny = 2; ///< even
    double jitter = 0.05;
    unsigned seed = 1;
    double c0 = 1e-3;
    double strain_rate = 1; ///< box strain rate along x
    double horizon = 0.004;
};

/// Triangular lattice in a periodic box, node 0 pinned, uniaxial box strain along x.
[[nodiscard]] Problem build_periodic_tri(const PeriodicSpec& spec = {});

} // namespace lsm
