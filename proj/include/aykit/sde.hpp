#pragma once

#include "aykit/path.hpp"
#include "aykit/profile.hpp"

namespace aykit {

struct SdeSolution {
  Path path;
  StopEvent event;
  // Y ended strictly below w(Ybar) because the driver overshot below 0 on the grid.
  bool undershoot = false;
};

// dY = phi(Ybar) dX, Y_0 = a*. Closed form Y = M^U(X) with V = a + int 1/phi.
// When V(inf) is finite the path is cut just before X first reaches it and
// the event is hit_barrier at that index with level V(inf).
SdeSolution solve_bachelier_closed(const Path& x, const Coefficient& phi, double a_star);
// Left-point Euler recursion, same truncation.
Path solve_bachelier_euler(const Path& x, const Coefficient& phi, double a_star);

// dY = (Y - w(Ybar)) dX / X, Y_0 = a*, up to zeta = first hit of 0 or of V(r_w-).
SdeSolution solve_drawdown_closed(const Path& x, const DrawdownFunction& w, double a_star);
Path solve_drawdown_euler(const Path& x, const DrawdownFunction& w, double a_star);

// X = M^V(Y). Y must keep Y > w(Ybar) before its stop index (or before its
// last point when no stop index is set).
Path recover_driver(const Path& y, const DrawdownFunction& w, double a);

}  // namespace aykit
