#pragma once

#include <random>
#include <string>
#include <vector>

#include "connforge/expr.hpp"

namespace connforge::testutil {

/// Random expression source over x1..xn, drawn from the supported grammar.
/// Arguments of exp are damped and denominators kept away from zero so every
/// generated expression is finite on [-1,1]^n.
inline std::string random_expr(std::mt19937_64& rng, int n, int depth = 3) {
    auto uniform = [&rng](double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1p-53);
    };
    auto coord = [&rng, n] { return "x" + std::to_string(1 + rng() % n); };
    if (depth == 0) {
        if (rng() % 2 == 0) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.6f", uniform(-2.0, 2.0));
            return std::string(buf);
        }
        return coord();
    }
    switch (rng() % 8) {
    case 0: return "(" + random_expr(rng, n, depth - 1) + " + " +
                   random_expr(rng, n, depth - 1) + ")";
    case 1: return "(" + random_expr(rng, n, depth - 1) + " - " +
                   random_expr(rng, n, depth - 1) + ")";
    case 2: return "(" + random_expr(rng, n, depth - 1) + " * " +
                   random_expr(rng, n, depth - 1) + ")";
    case 3: return "sin(" + random_expr(rng, n, depth - 1) + ")";
    case 4: return "cos(" + random_expr(rng, n, depth - 1) + ")";
    case 5: return "exp(0.3 * " + coord() + ")";
    case 6: return "(" + coord() + ")^" + std::to_string(2 + rng() % 2);
    default:
        return "(" + random_expr(rng, n, depth - 1) + " / ((" + coord() +
               ")^2 + 2))";
    }
}

inline double central_fd(const ScalarExpr& e, int i, std::vector<double> p,
                         double h = 1e-5) {
    p[static_cast<std::size_t>(i)] += h;
    double up = e.eval(p);
    p[static_cast<std::size_t>(i)] -= 2 * h;
    double down = e.eval(p);
    return (up - down) / (2 * h);
}

} // namespace connforge::testutil
