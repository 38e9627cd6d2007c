#pragma once

// Matrix exponential by scaling and squaring with the degree-13 diagonal
// Padé approximant (Higham 2005). The matrix is scaled by 2^-s so that its
// 1-norm is below theta_13, the Padé form is evaluated and then squared s
// times.

#include "tripartite/core/matrix.hpp"

#include <array>
#include <cmath>
#include <cstdio>

namespace tripartite {

inline double one_norm(const ComplexMatrix& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().colwise().sum().maxCoeff();
}

inline ComplexMatrix matrix_exp(const ComplexMatrix& a) {
    require_square(a, "matrix_exp");
    const Eigen::Index n = a.rows();
    if (n == 0)
        return a;

    constexpr double theta13 = 5.371920351148152;
    constexpr std::array<double, 14> b = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
        129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
        1323241920.0,        40840800.0,          960960.0,           16380.0,
        182.0,               1.0};

    const double norm = one_norm(a);
    if (norm == 0.0)
        return ComplexMatrix::Identity(n, n);
    int s = 0;
    if (norm > theta13)
        s = static_cast<int>(std::ceil(std::log2(norm / theta13)));
    if (s > 60)
        std::fprintf(stderr, "matrix_exp: extreme norm %g, squaring %d times\n", norm, s);

    const ComplexMatrix x = a / std::ldexp(1.0, s);
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const ComplexMatrix x2 = x * x;
    const ComplexMatrix x4 = x2 * x2;
    const ComplexMatrix x6 = x4 * x2;

    const ComplexMatrix u_inner = b[13] * x6 + b[11] * x4 + b[9] * x2;
    const ComplexMatrix u =
        x * (x6 * u_inner + b[7] * x6 + b[5] * x4 + b[3] * x2 + b[1] * id);
    const ComplexMatrix v_inner = b[12] * x6 + b[10] * x4 + b[8] * x2;
    const ComplexMatrix v = x6 * v_inner + b[6] * x6 + b[4] * x4 + b[2] * x2 + b[0] * id;

    ComplexMatrix r = (v - u).partialPivLu().solve(v + u);
    for (int k = 0; k < s; ++k)
        r = r * r;
    return r;
}

} // namespace tripartite
