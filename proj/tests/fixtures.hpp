#pragma once
// Hand-entered data of the six-node toy lattice, kept separate from the generator so the
// tests do not compare the generator against itself.

#include <Eigen/Dense>

#include <cmath>

namespace fixtures {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline MatrixXd example1_Q()
{
    MatrixXd q(6, 10);
    q << 1, 0, 1, 0, 1, 0, 1, 0, 0, 0,
         0, 1, -1, 0, 0, 1, 0, 1, 0, 0,
         -1, 0, 0, 1, 0, -1, 0, 0, 1, 0,
         0, -1, 0, -1, -1, 0, 0, 0, 0, 1,
         0, 0, 0, 0, 0, 0, -1, -1, 0, 0,
         0, 0, 0, 0, 0, 0, 0, 0, -1, -1;
    return q;
}

inline VectorXd example1_xi0()
{
    VectorXd xi(12);
    xi << 2, -1, 2, 1, 4, -1, 4, 1, 0, 0, 6, 0;
    return xi;
}

inline VectorXd example1_ctilde()
{
    VectorXd c(10);
    const double h = 1 / std::sqrt(2.0);
    c << 1, 1, 1, 1, h, h, 10, 10, 10, 10;
    return c;
}

inline MatrixXd example1_R()
{
    MatrixXd r = MatrixXd::Zero(4, 12);
    for (int i = 0; i < 4; ++i)
        r(i, 8 + i) = 1;
    return r;
}

/// Reference 10x2 basis of the self-stress space of the toy lattice.
inline MatrixXd example1_reference_V()
{
    MatrixXd v(10, 2);
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

} // namespace fixtures
