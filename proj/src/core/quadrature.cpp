#include "core/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace difflab::quad {
namespace {

// 15-point Kronrod nodes/weights on [-1, 1] with the embedded 7-point Gauss rule.
constexpr double kXgk[15] = {
    -0.991455371120812639206854697526329, -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926, -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730, -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245, 0.0,
    0.207784955007898467600689403773245,  0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,  0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,  0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};
constexpr double kWk[15] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
    0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
    0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};
constexpr double kWg[7] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
    0.381830050505118944950369775488975, 0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};

struct Panel {
  double a, b, value, err;
  bool operator<(const Panel& o) const { return err < o.err; }
};

Panel eval_panel(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
  double k = 0.0, gs = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double fi = f(c + hw * kXgk[i]);
    k += kWk[i] * fi;
    if (i % 2 == 1) gs += kWg[i / 2] * fi;
  }
  return {a, b, k * hw, std::abs((k - gs) * hw)};
}

}  // namespace

Result integrate(const std::function<double(double)>& f, double a, double b,
                 const std::vector<double>& breakpoints, double abs_tol, double rel_tol,
                 int max_panels) {
  if (a == b) return {0.0, 0.0, true};
  std::vector<double> edges{a, b};
  for (double p : breakpoints)
    if (p > a && p < b) edges.push_back(p);
  std::sort(edges.begin(), edges.end());

  std::priority_queue<Panel> q;
  double total = 0.0, total_err = 0.0;
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    Panel p = eval_panel(f, edges[i], edges[i + 1]);
    total += p.value;
    total_err += p.err;
    q.push(p);
  }
  int panels = static_cast<int>(edges.size()) - 1;
  while (total_err > std::max(abs_tol, rel_tol * std::abs(total)) && panels < max_panels) {
    Panel worst = q.top();
    q.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) break;  // interval exhausted
    Panel l = eval_panel(f, worst.a, mid);
    Panel r = eval_panel(f, mid, worst.b);
    total += l.value + r.value - worst.value;
    total_err += l.err + r.err - worst.err;
    q.push(l);
    q.push(r);
    ++panels;
  }
  const bool ok = total_err <= std::max(abs_tol, rel_tol * std::abs(total));
  return {total, total_err, ok};
}

}  // namespace difflab::quad
