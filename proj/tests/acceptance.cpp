// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "monolab/functionals.hpp"
#include "monolab/geometry.hpp"
#include "monolab/theorems.hpp"

using namespace monolab;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Params params(double k, double l, double beta, double p, double N = kInfiniteN) {
  Params prm;
  prm.k = k;
  prm.l = l;
  prm.beta = beta;
  prm.p = p;
  prm.N = N;
  return prm;
}

// The verified Ric_f^N >= 0 (N = 1) weighted profile.
Profile weighted4() {
  return Profile(4, Expr::parse("r/sqrt(1+r)"), Expr::parse("1-1/sqrt(1+r^2)"), 100.0,
                 TailModel{0.5, 0.0}, "weighted_nonneg");
}

std::vector<Profile> builtins() {
  return {builtin_profile("euclidean", 3), builtin_profile("bryant_surrogate", 3),
          builtin_profile("euclidean_weighted_linear", 3)};
}

// Collects failures of one criterion.
class Criterion {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 6) failures_.push_back(what);
    if (!ok) ++count_;
  }
  void report(const CheckReport& rep, const std::string& where) {
    std::ostringstream s;
    s << where << ' ' << rep.theorem_id << ' ' << to_string(rep.verdict);
    if (rep.has_identity) s << " residual=" << rep.max_residual;
    if (rep.has_inequality) s << " margin=" << rep.min_margin;
    require(rep.verdict == Verdict::Pass, s.str());
  }
  void note(const std::string& text) { notes_.push_back(text); }
  bool ok() const { return count_ == 0; }
  std::string detail() const {
    std::string out;
    for (const auto& n : notes_) out += (out.empty() ? "" : "; ") + n;
    for (const auto& f : failures_) out += (out.empty() ? "" : "; ") + std::string("failed: ") + f;
    if (count_ > failures_.size())
      out += "; " + std::to_string(count_ - failures_.size()) + " more failures";
    return out;
  }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
  std::size_t count_ = 0;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void euclidean_exactness(Criterion& c) {
  for (int n : {3, 4, 5}) {
    const auto t0 = Clock::now();
    const Profile p = builtin_profile("euclidean", n);
    const auto green = compute_green(p);
    const BFunction bd = b_function(green, n);
    double worst_g = 0.0, worst_b = 0.0, worst_a = 0.0;
    const Params prm = params(n, n, 2, 0);
    const double omega = unit_sphere_area(n) * std::exp(-p.f0());
    for (double r : log_grid(1e-3, 0.8 * p.r_max(), 256)) {
      worst_g = std::max(worst_g, rel(green->value(r), std::pow(r, 2.0 - n)));
      worst_b = std::max(worst_b, rel(bd.value(r), r));
      worst_a = std::max(worst_a, rel(area_functional(bd, prm, bd.value(r)), omega));
    }
    const double dt = seconds_since(t0);
    const std::string tag = "n=" + std::to_string(n);
    c.require(worst_g <= 1e-10, tag + " G " + fmt("%.2e", worst_g));
    c.require(worst_b <= 1e-10, tag + " b " + fmt("%.2e", worst_b));
    c.require(worst_a <= 1e-9, tag + " A " + fmt("%.2e", worst_a));
    c.require(dt < 1.0, tag + " runtime " + fmt("%.2fs", dt));
    c.note(tag + fmt(" max dev %.1e", std::max({worst_g, worst_b, worst_a})) + fmt(" %.2fs", dt));
  }
}

void section3_identities(Criterion& c) {
  const auto t0 = Clock::now();
  for (const Profile& p : builtins()) {
    const Context ctx = make_context(p);
    for (double k : {p.dimension() + 0.0, p.dimension() + 1.5}) {
      for (double pp : {0.0, 1.0}) {
        const auto rep = check_identities_3x(ctx, params(k, k, 2, pp), 64);
        c.require(rep.identity_tol <= 1e-7, "identity tolerance above 1e-7");
        c.report(rep, p.name() + fmt(" k=%g", k) + fmt(" p=%g", pp));
      }
    }
  }
  const double dt = seconds_since(t0);
  c.require(dt < 5.0, "runtime " + fmt("%.2fs", dt));
  c.note(fmt("3 profiles, %.2fs", dt));
}

void bochner(Criterion& c) {
  for (const Profile& p : {builtin_profile("euclidean", 3), builtin_profile("bryant_surrogate", 3)}) {
    const Context ctx = make_context(p);
    const auto rep = check_bochner(ctx, params(p.dimension(), p.dimension(), 2, 0));
    c.report(rep, p.name());
    c.require(rep.max_residual <= 1e-6, p.name() + " residual " + fmt("%.2e", rep.max_residual));
    c.note(p.name() + fmt(" %.1e", rep.max_residual));
  }
}

void lemma41(Criterion& c) {
  int zero = 0, finite = 0, infinite = 0;
  struct Tuple {
    double dk, dl, beta;
  };
  // C(n,k,l) = (k-l)(n-2) + (n-k)β: 0, > 0, < 0, and 0 with k != n
  const Tuple tuples[] = {{0, 0, 2}, {0, -1, 2}, {0, 1, 2}, {2, 1, 1}};
  for (const char* name : {"euclidean", "euclidean_weighted_linear"}) {
    for (int n : {4, 5}) {
      const Profile p = builtin_profile(name, n);
      const Context ctx = make_context(p);
      for (const auto& t : tuples) {
        const double k = n + t.dk, l = n + t.dl;
        const Params prm = params(k, l, t.beta, 0);
        const double C = (k - l) * (n - 2) + (n - k) * t.beta;
        const auto rep = check_lemma_41(ctx, prm);
        c.report(rep, p.name() + " n=" + std::to_string(n) + fmt(" k=%g", k) + fmt(" l=%g", l));
        if (rep.verdict == Verdict::Pass) (C == 0 ? finite : (C > 0 ? zero : infinite))++;
        if (C == 0) {
          const auto lim = small_r_limits(n, prm, p.f0());
          const BFunction bd = b_function(ctx.green, k);
          const double A = area_functional(bd, prm, 1e-3);
          const double V = volume_functional(bd, prm, 1e-3);
          const double Ck = (n - 2) * k - t.beta * (k - n);
          c.require(rel(A, lim.A.value) <= 1e-3, p.name() + fmt(" A(1e-3) dev %.2e", rel(A, lim.A.value)));
          c.require(rel(V, lim.A.value * (n - 2) / Ck) <= 1e-3,
                    p.name() + fmt(" V(1e-3) dev %.2e", rel(V, lim.A.value * (n - 2) / Ck)));
          c.require(lim.V && rel(lim.V->value, lim.A.value * (n - 2) / Ck) <= 1e-14,
                    "V limit factor");
        }
      }
    }
  }
  c.require(zero > 0 && finite > 0 && infinite > 0, "a sign case was not reproduced");
  c.note("zero/finite/infinite cases passed: " + std::to_string(zero) + "/" +
         std::to_string(finite) + "/" + std::to_string(infinite));
}

void h_constancy(Criterion& c) {
  double worst = 0.0;
  std::vector<Profile> profiles = builtins();
  profiles.push_back(builtin_profile("bryant_surrogate", 5));
  profiles.push_back(weighted4());
  for (const Profile& p : profiles) {
    const auto green = compute_green(p);
    const int n = p.dimension();
    for (double k : {n + 0.0, n + 1.0, 2.0 * n}) {
      const BFunction bd = b_function(green, k);
      const double hc = h_constant(bd);
      for (double rho : default_rho_grid(bd)) {
        const double d = rel(h_invariant(bd, rho), hc);
        worst = std::max(worst, d);
        c.require(d <= 1e-8, p.name() + fmt(" k=%g", k) + fmt(" dev %.2e", d));
      }
    }
  }
  c.note(fmt("max deviation %.1e", worst));
}

void section4_identities(Criterion& c) {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (const Profile& p : builtins()) {
    const Context ctx = make_context(p);
    const int n = p.dimension();
    Params t1 = params(n + 1, n + 1, 2, 0);
    t1.alpha = 1.0;
    t1.c = 3 - t1.k;
    Params t2 = params(n + 1, n + 2, 1.5, 1);
    t2.alpha = 0.5;
    t2.c = 0.5;
    t2.d = -1.0;
    Params t3 = params(n, n, 2, 2);  // p = 2
    t3.alpha = 2.5;
    t3.c = t3.k - 1;
    t3.d = t3.l - 2 * t3.k + 2;
    for (const Params& prm : {t1, t2, t3}) {
      const std::string where = p.name() + fmt(" k=%g", prm.k) + fmt(" l=%g", prm.l) +
                                fmt(" p=%g", prm.p);
      std::vector<std::string> ids{"thm-4.3", "thm-4.5"};
      if (prm.k == prm.l) ids.push_back("cor-4.4");
      for (const auto& id : ids) {
        const auto rep = run_check(id, ctx, prm);
        c.report(rep, where);
        c.require(rep.max_residual <= 1e-6, where + " " + id);
        worst = std::max(worst, rep.max_residual);
      }
      // dV = ((p - l) V + A) / ρ
      const BFunction bd = b_function(ctx.green, prm.k);
      for (const auto& pt : curve(bd, prm, default_rho_grid(bd))) {
        const double rhs = ((prm.p - prm.l) * pt.V + pt.A) / pt.rho;
        const double scale = std::abs(pt.dV) + (std::abs((prm.p - prm.l) * pt.V) + pt.A) / pt.rho;
        const double r = std::abs(pt.dV - rhs) / scale;
        worst = std::max(worst, r);
        c.require(r <= 1e-6, where + fmt(" dV identity %.2e", r));
      }
    }
  }
  const double dt = seconds_since(t0);
  c.require(dt < 30.0, "runtime " + fmt("%.2fs", dt));
  c.note(fmt("max residual %.1e", worst) + fmt(", %.2fs", dt));
}

void section5_predicates(Criterion& c) {
  struct Case {
    Profile p;
    double N;
    std::vector<double> ps;
  };
  const Case cases[] = {{builtin_profile("euclidean", 3), 0.0, {0.0, 2.0}},
                        {weighted4(), 1.0, {0.0, 3.0}}};
  for (const auto& cs : cases) {
    const Context ctx = make_context(cs.p);
    const int n = cs.p.dimension();
    const double k = n + cs.N;
    const auto curv = check_curvature_nonneg(cs.p, cs.N, log_grid(1e-4, cs.p.r_max(), 1024));
    c.require(curv.nonnegative, cs.p.name() + " curvature");
    for (double pp : cs.ps) {
      Params prm = params(k, k, 2, pp, cs.N);
      c.require(pp < n + cs.N - 2 * cs.N / (n - 2.0), "p outside the V window");
      const auto r12 = run_check("thm-1.2", ctx, prm);
      c.report(r12, cs.p.name() + fmt(" p=%g", pp));
      const Metric* chain = r12.metric("chain_min_slack");
      c.require(chain && chain->value >= -1e-9, cs.p.name() + " chain");
      const auto r13 = run_check("thm-1.3", ctx, prm);
      c.report(r13, cs.p.name() + fmt(" p=%g", pp));
      c.require(r13.min_margin >= -1e-8, cs.p.name() + " thm-1.3 slack");
      const Metric* tail = r13.metric("decay_bound_tail_estimate");
      const Metric* slack = r13.metric("decay_bound_min_slack_with_tail");
      c.require(tail && slack && slack->value >= -1e-8, cs.p.name() + " decay bound");
      if (tail && chain && slack && pp == 0.0)
        c.note(cs.p.name() + fmt(" chain %.3g", chain->value) + fmt(" decay bound slack %.3g", slack->value) +
               fmt(" tail %.2e", tail->value));
    }
  }
}

void section6(Criterion& c) {
  const auto w = solve_l_window(12, 2);
  c.require(w && w->first == 16.0 && w->second == 18.0, "window (16, 18)");
  c.require(w && w->first <= 17.0 && 17.0 <= w->second, "l = 3k/2 - 1 inside");
  c.require(w && w->first <= 16.5 && 16.5 <= w->second, "l = 3(k-1)/2 inside");
  const Context c4 = make_context(weighted4());
  c.report(run_check("thm-1.4", c4, params(12, 12, 2, 0)), "weighted_nonneg k=12");
  double worst = 0.0;
  for (const Profile& p : {builtin_profile("euclidean_weighted_linear", 3),
                           builtin_profile("euclidean_weighted_linear", 4), weighted4()}) {
    const Context ctx = make_context(p);
    const int n = p.dimension();
    for (double pp : {0.0, 1.0}) {
      for (const char* id : {"thm-6.2", "thm-6.3"}) {
        const auto rep = run_check(id, ctx, params(n, n, 2, pp));
        c.report(rep, p.name() + " n=" + std::to_string(n));
        c.require(rep.has_identity && rep.max_residual <= 1e-6, p.name() + " " + id);
        worst = std::max(worst, rep.max_residual);
      }
    }
  }
  c.note(fmt("window (%g, ", w ? w->first : NAN) + fmt("%g)", w ? w->second : NAN) +
         fmt(", max 6.2/6.3 residual %.1e", worst));
}

void bryant(Criterion& c) {
  const auto t0 = Clock::now();
  for (int n : {3, 5}) {
    const BryantReport rep = bryant_limit(n);
    const std::string tag = "n=" + std::to_string(n);
    c.require(rep.relative_deviation <= 0.05, tag + fmt(" deviation %.3g", rep.relative_deviation));
    c.require(rep.sign == (n == 3 ? 1 : -1), tag + " sign");
    c.require(rep.direction == (n == 3 ? 1 : -1), tag + " direction");
    c.require(rep.sign_expected && rep.direction_expected, tag + " expectations");
    c.note(tag + fmt(" fitted %.6g", rep.fitted_limit) + fmt(" vs %.6g", rep.closed_form_limit) +
           fmt(" direction stable from r=%.3g", rep.stabilization_radius));
  }
  const double dt = seconds_since(t0);
  c.require(dt < 10.0, "runtime " + fmt("%.2fs", dt));
  c.note(fmt("%.2fs", dt));
}

std::vector<double> doubled(const std::vector<double>& g) {
  std::vector<double> out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    out.push_back(g[i]);
    if (i + 1 < g.size()) out.push_back(std::sqrt(g[i] * g[i + 1]));
  }
  return out;
}

void grid_refinement(Criterion& c) {
  struct Job {
    Profile p;
    Params prm;
    std::vector<const char*> ids;
  };
  Params e = params(3, 3, 2, 0, 0);
  e.alpha = 4;
  Params b = params(4, 5, 2, 1);
  b.alpha = 1.5;
  b.c = 0.5;
  const Job jobs[] = {
      {builtin_profile("euclidean", 3), e, {"thm-4.3", "thm-4.5", "cor-4.4", "thm-6.2", "thm-6.3", "thm-1.2", "thm-1.3"}},
      {builtin_profile("bryant_surrogate", 3), b, {"thm-4.3", "thm-4.5"}},
      {builtin_profile("euclidean_weighted_linear", 3), params(3, 3, 2, 0), {"thm-6.2", "thm-6.3", "cor-4.4"}},
      {weighted4(), params(5, 5, 2, 0, 1), {"thm-4.3", "thm-1.2", "thm-1.3", "cor-5.1", "prop-5.2"}},
  };
  double worst = 0.0;
  for (const auto& job : jobs) {
    const Context ctx = make_context(job.p);
    const BFunction bd = b_function(ctx.green, job.prm.k);
    const auto coarse = default_rho_grid(bd, ctx.grid_size);
    const auto fine = doubled(coarse);
    for (const char* id : job.ids) {
      const auto a = run_check(id, ctx, job.prm, coarse);
      const auto f = run_check(id, ctx, job.prm, fine);
      const double change = std::abs(a.max_residual - f.max_residual);
      worst = std::max(worst, change);
      const std::string where = job.p.name() + " " + id;
      c.require(change <= 10 * ctx.quad_tol, where + fmt(" residual change %.2e", change));
      c.require(a.verdict == f.verdict, where + " verdict flip");
    }
  }
  c.note(fmt("max residual change %.1e", worst));
}

}  // namespace

int main() {
  struct Entry {
    const char* title;
    std::function<void(Criterion&)> run;
  };
  const Entry entries[] = {
      {"euclidean exactness", euclidean_exactness},
      {"Laplacian identities of b", section3_identities},
      {"Bochner residual", bochner},
      {"small-radius limits", lemma41},
      {"h constancy", h_constancy},
      {"A/V identity suite", section4_identities},
      {"monotonicity predicates", section5_predicates},
      {"l window and k = l = n identities", section6},
      {"Bryant bracket limit", bryant},
      {"grid refinement stability", grid_refinement},
  };
  int failed = 0, index = 0;
  for (const auto& e : entries) {
    ++index;
    Criterion c;
    try {
      e.run(c);
    } catch (const std::exception& ex) {
      c.require(false, std::string("exception: ") + ex.what());
    }
    std::printf("%s %d %s: %s\n", c.ok() ? "PASS" : "FAIL", index, e.title, c.detail().c_str());
    std::fflush(stdout);
    if (!c.ok()) ++failed;
  }
  std::printf("%d/10 criteria passed\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}
