#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"
#include "cz_fixtures.hpp"
#include "oracles.hpp"
#include "suctionlab/cz_partition.hpp"
#include "suctionlab/errors.hpp"
#include "suctionlab/exact.hpp"
#include "suctionlab/operators.hpp"

using namespace suctionlab;
using namespace cz_fixture;

namespace {

double overlap(double a0, double a1, double b0, double b1) { return std::max(0.0, std::min(a1, b1) - std::max(a0, b0)); }

// Direct summation over cells and time bins, with periodic images in x.
double brute_integral(const SpaceTimeField& d, double t0, double t1, double x0, double x1, double y0, double y1) {
  double s = 0.0;
  for (int n = 0; n + 1 < d.n_times(); ++n) {
    const double ot = overlap(t0, t1, d.times[n], d.times[n + 1]);
    if (ot == 0.0) continue;
    for (int j = 0; j < d.n_rows(); ++j) {
      const double oy = overlap(y0, y1, d.y_faces[j], d.y_faces[j + 1]);
      if (oy == 0.0) continue;
      for (int i = 0; i < d.n_x; ++i) {
        const double lo = d.x_offset + i * d.dx();
        double ox = 0.0;
        for (int k = -2; k <= 2; ++k) ox += overlap(x0, x1, lo + k * d.l_x, lo + d.dx() + k * d.l_x);
        s += 0.5 * (d.at(n, j, i) + d.at(n + 1, j, i)) * ot * oy * ox;
      }
    }
  }
  return s;
}

double brute_trace(const BoundaryTrace& d, double t0, double t1, double x0, double x1) {
  double s = 0.0;
  for (std::size_t n = 0; n + 1 < d.times.size(); ++n) {
    const double ot = overlap(t0, t1, d.times[n], d.times[n + 1]);
    for (int i = 0; i < d.n_x; ++i) {
      const double lo = d.x_offset + i * d.dx();
      double ox = 0.0;
      for (int k = -2; k <= 2; ++k) ox += overlap(x0, x1, lo + k * d.l_x, lo + d.dx() + k * d.l_x);
      s += 0.5 * (d.values[n * d.n_x + i] + d.values[(n + 1) * d.n_x + i]) * ot * ox;
    }
  }
  return s;
}

}  // namespace

TEST_CASE("integrators match direct summation") {
  const SpaceTimeField d = dyadic_field([](double t, double x, double y) {
    return 1.0 + std::sin(2.0 * std::numbers::pi * x) * std::cos(3.0 * t) + 50.0 * y;
  });
  const SpaceTimeIntegrator integ(d);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    double t0 = u(rng), t1 = u(rng);
    if (t0 > t1) std::swap(t0, t1);
    const double x0 = 2.0 * u(rng) - 0.5;
    const double x1 = x0 + 1.5 * u(rng);
    double y0 = u(rng) * d.y_faces.back(), y1 = u(rng) * d.y_faces.back();
    if (y0 > y1) std::swap(y0, y1);
    const double expected = brute_integral(d, t0, t1, x0, x1, y0, y1);
    CHECK(integ.integral(t0, t1, x0, x1, y0, y1) == doctest::Approx(expected).epsilon(1e-11).scale(1e-12));
  }

  BoundaryTrace b = dyadic_trace([](double t, double x) { return std::exp(t) * (2.0 + std::cos(2.0 * std::numbers::pi * x)); });
  b.x_offset = -0.5 * b.dx();
  const TraceIntegrator ti(b);
  for (int k = 0; k < 50; ++k) {
    double t0 = u(rng), t1 = u(rng);
    if (t0 > t1) std::swap(t0, t1);
    const double x0 = 2.0 * u(rng) - 0.5;
    const double x1 = x0 + 1.5 * u(rng);
    CHECK(ti.integral(t0, t1, x0, x1) == doctest::Approx(brute_trace(b, t0, t1, x0, x1)).epsilon(1e-11).scale(1e-12));
  }
}

TEST_CASE("precondition and root fitting") {
  SimulationParams p;
  p.nu = 0.01;
  p.u_bar = 2.0;
  CHECK(precondition_check(p.nu / (8.0 * p.u_bar * p.u_bar), p));
  CHECK_FALSE(precondition_check(p.nu / (4.0 * p.u_bar * p.u_bar), p));
  CHECK_THROWS_AS(precondition_check(0.0, p), PreconditionError);
  p.u_bar = 0.0;
  CHECK_THROWS_AS(precondition_check(1e-3, p), PreconditionError);

  CHECK(fitted_eps0(1.0, std::ldexp(1.0, -10), 1.0) == std::ldexp(1.0, -5));
  const double e = fitted_eps0(1e-3, 0.01, 1.0);
  CHECK(e <= std::sqrt(1e-5));
  CHECK(std::abs(1.0 / e - std::round(1.0 / e)) < 1e-9);
  CHECK(std::round(1.0 / e) == std::ceil(1.0 / std::sqrt(1e-5)));
  CHECK(stopping_threshold(0.5, 0.01, 0.1) == doctest::Approx(0.5));
}

TEST_CASE("small field: no refinement, exact tiling") {
  const SimulationParams p = dyadic_params();
  // Root threshold is nu / (eps0/2)^2 = 4; a uniform |grad u|^2 = 1 stays below it.
  const Partition part = partition(dyadic_field([](double, double, double) { return 1.0; }), 1.0, kTau, p);
  CHECK(part.eps0 == std::ldexp(1.0, -5));
  CHECK(part.tau_eff == 1.0);
  CHECK(part.window_start() == 0.75);
  CHECK(part.window_end() == 1.0);
  CHECK(part.refinements == 0);
  CHECK(part.leaves.size() == 32);
  CHECK(part.total_measure() == 0.25);
  for (const PartitionLeaf& leaf : part.leaves) {
    CHECK(leaf.box.depth == 0);
    CHECK(leaf.average == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(leaf.flagged());
  }
}

TEST_CASE("spike: localized refinement, tiling, stopping rule") {
  const SimulationParams p = dyadic_params();
  const SpaceTimeField d = spike_field();
  const Partition part = partition(d, 1.0, kTau, p);
  const SpaceTimeIntegrator integ(d);
  const double total = brute_integral(d, 0.0, 1.0, 0.0, 1.0, 0.0, d.y_faces.back());

  CHECK(part.refinements > 0);
  CHECK(part.unresolved > 0);
  CHECK(part.clipped == 0);
  CHECK(part.min_eps == std::ldexp(1.0, -9));
  // Measures are dyadic, so the sum is exact.
  CHECK(part.total_measure() == 0.25);

  int max_depth = 0;
  for (std::size_t k = 0; k < part.leaves.size(); ++k) {
    const PartitionLeaf& leaf = part.leaves[k];
    const SpaceTimeBox& b = leaf.box;
    max_depth = std::max(max_depth, b.depth);
    INFO("leaf " << k << " depth " << b.depth);
    CHECK(b.t_start() >= part.window_start());
    CHECK(b.t_end <= part.window_end());
    CHECK(b.x_left() >= 0.0);
    CHECK(b.x_center + b.eps <= 1.0);
    // Parabolic scaling: time_length nu / eps^2 = 1 with no drift across depths.
    CHECK(b.time_length * p.nu / (b.eps * b.eps) == 1.0);
    CHECK(b.eps == std::ldexp(std::ldexp(1.0, -6), -b.depth));
    if (k > 0) {
      const SpaceTimeBox& a = part.leaves[k - 1].box;
      CHECK((a.t_start() < b.t_start() || (a.t_start() == b.t_start() && a.x_left() < b.x_left())));
    }

    const double volume = 4.0 * b.time_length * 4.0 * b.eps * 2.0 * b.eps;
    const double mean = brute_integral(d, b.t_end - 4.0 * b.time_length, b.t_end, b.x_center - 2.0 * b.eps,
                                       b.x_center + 2.0 * b.eps, 0.0, 2.0 * b.eps) / volume;
    // The cumulative table loses digits to cancellation in proportion to the total mass.
    CHECK(std::abs(leaf.average * leaf.average - mean) <= 1e-10 * mean + 1e-14 * total / volume);
    CHECK(leaf.threshold == p.nu / (b.eps * b.eps));
    if (!leaf.flagged()) CHECK(leaf.average <= leaf.threshold);
    if (leaf.unresolved) {
      CHECK(leaf.average > leaf.threshold);
      CHECK(0.5 * b.eps < part.min_eps);
    }
    if (b.depth > 0) {
      const SpaceTimeBox parent = parent_of(b, part.window_end());
      CHECK(parent.x_left() <= b.x_left());
      CHECK(b.x_center + b.eps <= parent.x_center + parent.eps);
      CHECK(parent.t_start() <= b.t_start());
      CHECK(b.t_end <= parent.t_end);
      CHECK(stopping_average(integ, parent).first > stopping_threshold(1.0, p.nu, parent.eps));
    }
    if (std::abs(b.x_center - 0.3) > 0.2) CHECK(b.depth == 0);
  }
  CHECK(max_depth == 3);

  // Every point of the window lies in exactly one leaf.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ut(0.75, 1.0), ux(0.0, 1.0);
  for (int k = 0; k < 2000; ++k) {
    const double t = ut(rng), x = ux(rng);
    int hits = 0;
    for (const PartitionLeaf& leaf : part.leaves) {
      if (t >= leaf.box.t_start() && t < leaf.box.t_end && x >= leaf.box.x_left() && x < leaf.box.x_center + leaf.box.eps) {
        ++hits;
      }
    }
    CHECK(hits == 1);
  }

  const Partition again = partition(d, 1.0, kTau, p);
  REQUIRE(again.leaves.size() == part.leaves.size());
  for (std::size_t k = 0; k < part.leaves.size(); ++k) {
    CHECK(std::memcmp(&again.leaves[k].box, &part.leaves[k].box, sizeof(SpaceTimeBox)) == 0);
    CHECK(std::memcmp(&again.leaves[k].average, &part.leaves[k].average, sizeof(double)) == 0);
  }
}

TEST_CASE("anisotropy holds for non-dyadic scales") {
  SimulationParams p;
  p.nu = 0.003;
  p.l_x = 1.0;
  p.u_bar = p.u_star = 0.3;
  const double tau = 0.2 * p.nu / (4.0 * p.u_bar * p.u_bar);
  const double eps0 = fitted_eps0(tau, p.nu, p.l_x);
  const double tau_eff = eps0 * eps0 / p.nu;
  SpaceTimeField d;
  d.l_x = 1.0;
  d.n_x = 256;
  for (int j = 0; j <= 40; ++j) d.y_faces.push_back(j * eps0 / 32.0);
  for (int n = 0; n <= 20; ++n) d.times.push_back(n * tau_eff / 20.0);
  d.values.assign(21 * 40 * 256, 0.0);
  for (int n = 0; n <= 20; ++n) {
    for (int j = 0; j < 40; ++j) {
      for (int i = 0; i < 256; ++i) d.at(n, j, i) = (j < 4 && i > 100 && i < 104) ? 1e9 : 1.0;
    }
  }
  const Partition part = partition(d, 0.5, tau, p);
  CHECK(part.refinements > 0);
  double ratio = std::numeric_limits<double>::quiet_NaN();
  for (const PartitionLeaf& leaf : part.leaves) {
    const double r = leaf.box.time_length * p.nu / (leaf.box.eps * leaf.box.eps);
    if (std::isnan(ratio)) ratio = r;
    CHECK(r == ratio);
  }
  CHECK(ratio == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(part.total_measure() == doctest::Approx(0.25 * tau_eff * p.l_x).epsilon(1e-10));
}

TEST_CASE("partition preconditions") {
  const SimulationParams p = dyadic_params();
  const SpaceTimeField d = dyadic_field([](double, double, double) { return 1.0; });
  PartitionOptions late;
  late.t_origin = 0.5;
  CHECK_THROWS_AS(partition(d, 1.0, kTau, p, late), PreconditionError);
  CHECK_THROWS_AS(partition(d, 1.0, 16.0 * kTau, p), PreconditionError);
  CHECK_THROWS_AS(partition(d, 0.0, kTau, p), PreconditionError);
  CHECK_THROWS_AS(partition(d, 1.5, kTau, p), PreconditionError);
  SimulationParams q = p;
  q.l_x = 2.0;
  CHECK_THROWS_AS(partition(d, 1.0, kTau, q), PreconditionError);
  SpaceTimeField short_data = d;
  short_data.times.pop_back();
  CHECK_THROWS_AS(partition(short_data, 1.0, kTau, p), PreconditionError);
}

TEST_CASE("omega_tilde examples") {
  const SimulationParams p = dyadic_params();
  Partition part = partition(spike_field(), 1.0, kTau, p);

  omega_tilde(part, dyadic_trace([](double, double) { return -3.25; }));
  for (const PartitionLeaf& leaf : part.leaves) CHECK(leaf.omega_tilde == doctest::Approx(-3.25).epsilon(1e-9));

  // Linear in x: boxes of depth <= 1 are unions of whole columns, so the mean is the midpoint value.
  omega_tilde(part, dyadic_trace([](double, double x) { return 2.0 + 5.0 * x; }));
  for (const PartitionLeaf& leaf : part.leaves) {
    if (leaf.box.depth <= 1) CHECK(leaf.omega_tilde == doctest::Approx(2.0 + 5.0 * leaf.box.x_center).epsilon(1e-9));
  }

  BoundaryTrace wrong = dyadic_trace([](double, double) { return 1.0; });
  wrong.l_x = 2.0;
  CHECK_THROWS_AS(omega_tilde(part, wrong), PreconditionError);
  BoundaryTrace early = dyadic_trace([](double, double) { return 1.0; });
  for (double& t : early.times) t *= 0.5;
  CHECK_THROWS_AS(omega_tilde(part, early), PreconditionError);
}

TEST_CASE("stationary layer: terminates, omega is -V U / nu") {
  SimulationParams p;
  p.nu = 0.01;
  p.u_star = p.u_bar = 1.0;
  p.v_star = p.v_bar = 1.0;
  const double tau = p.nu / 8.0;
  const double eps0 = fitted_eps0(tau, p.nu, p.l_x);
  const double tau_eff = eps0 * eps0 / p.nu;
  auto g = oracle::fine_grid(p, 8, 128, 1e-4);
  std::vector<StaggeredField> snaps;
  for (int n = 0; n <= 4; ++n) {
    StaggeredField f(g);
    fill_velocity(f, [&p](double, double y) { return exact::halfspace_stationary(p, y); }, WallData::canonical(p));
    f.time = n * tau_eff / 4.0;
    snaps.push_back(f);
  }
  const SpaceTimeField d = gradient_window(snaps, 1.01 * p.nu / p.u_bar);
  CHECK(d.y_faces.back() >= eps0);
  Partition part = partition(d, 1.0, tau, p);
  CHECK(part.refinements == 0);
  CHECK(part.unresolved == 0);
  CHECK(part.total_measure() == doctest::Approx(0.25 * tau_eff).epsilon(1e-12));

  const double k = p.u_star / p.nu;
  const double mean = k * k * (1.0 - std::exp(-2.0 * k * eps0)) / (2.0 * k * eps0);
  for (const PartitionLeaf& leaf : part.leaves) CHECK(leaf.average == doctest::Approx(std::sqrt(mean)).epsilon(1e-2));

  omega_tilde(part, wall_trace(snaps));
  for (const PartitionLeaf& leaf : part.leaves) {
    CHECK(leaf.omega_tilde == doctest::Approx(-p.v_star * p.u_star / p.nu).epsilon(1e-3));
  }

  // The layer budget is nu * window length * l_x * integral of k^2 e^{-2ky} over the layer.
  const double width = p.nu / p.u_bar;
  const double expected = p.nu * 0.25 * tau_eff * p.l_x * 0.5 * k * (1.0 - std::exp(-2.0));
  CHECK(layer_dissipation_budget(d, part, width) == doctest::Approx(expected).epsilon(1e-2));

  CHECK_THROWS_AS(gradient_window({snaps.front()}, eps0), PreconditionError);
  CHECK_THROWS_AS(wall_trace({snaps.front()}), PreconditionError);
}

TEST_CASE("weak-norm level sets match a direct sort") {
  const SimulationParams p = dyadic_params();
  const SpaceTimeField d = spike_field();
  Partition part = partition(d, 1.0, kTau, p);
  omega_tilde(part, dyadic_trace([](double t, double x) {
    return 40.0 * (1.0 + std::sin(2.0 * std::numbers::pi * x)) * (1.0 + t) + 3000.0 * std::exp(-std::pow((x - 0.3) / 0.01, 2));
  }));
  const double width = std::ldexp(1.0, -8);
  const double budget = layer_dissipation_budget(d, part, width);
  CHECK(budget == doctest::Approx(p.nu * brute_integral(d, 0.75, 1.0, 0.0, 1.0, 0.0, width)).epsilon(1e-11));

  const std::vector<double> ms = default_thresholds(part, 24);
  REQUIRE(ms.size() == 24);
  CHECK(ms.front() == doctest::Approx(std::sqrt(2.0) * p.nu / part.tau_eff).epsilon(1e-15));
  const WeakNormReport r = weak_norm_report(part, budget, ms);

  std::vector<std::pair<double, double>> kept;
  long excluded = 0;
  double excluded_measure = 0.0;
  for (const PartitionLeaf& leaf : part.leaves) {
    if (leaf.clipped || leaf.unresolved) {
      ++excluded;
      excluded_measure += leaf.box.measure();
    } else {
      kept.emplace_back(std::abs(p.nu * leaf.omega_tilde), 2.0 * leaf.box.eps * leaf.box.time_length);
    }
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  CHECK(r.excluded_leaves == excluded);
  CHECK(r.excluded_measure == excluded_measure);
  CHECK(r.budget == budget);

  double c = 0.0;
  bool some_nonzero = false, some_zero = false;
  REQUIRE(r.entries.size() == ms.size());
  for (std::size_t k = 0; k < ms.size(); ++k) {
    double measure = 0.0;
    for (const auto& [value, mu] : kept) {
      if (!(value > ms[k])) break;
      measure += mu;
    }
    CHECK(r.entries[k].m == ms[k]);
    CHECK(r.entries[k].measure == measure);
    const double rho = measure * std::pow(ms[k], 1.5) / budget;
    CHECK(r.entries[k].rho == doctest::Approx(rho).epsilon(1e-14));
    c = std::max(c, rho);
    (measure > 0.0 ? some_nonzero : some_zero) = true;
    if (k > 0) CHECK(r.entries[k].measure <= r.entries[k - 1].measure);
  }
  CHECK(some_nonzero);
  CHECK(some_zero);
  CHECK(r.c_emp == doctest::Approx(c).epsilon(1e-14));

  nlohmann::json j = r;
  CHECK(j.at("c_emp").get<double>() == r.c_emp);
  CHECK(j.at("entries").size() == ms.size());
  CHECK(j.at("entries")[0].at("M").get<double>() == ms[0]);

  std::ostringstream csv;
  write_partition_csv(csv, part);
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "depth,t_end,eps,x_center,omega_tilde,flag");
  std::size_t rows = 0, flagged = 0;
  while (std::getline(lines, line)) {
    ++rows;
    if (line.back() != '0') ++flagged;
  }
  CHECK(rows == part.leaves.size());
  CHECK(static_cast<long>(flagged) == excluded);

  CHECK_THROWS_AS(weak_norm_report(part, 0.0, ms), PreconditionError);
  CHECK_THROWS_AS(weak_norm_report(part, budget, {p.nu / part.tau_eff}), PreconditionError);
  Partition unset = partition(d, 1.0, kTau, p);
  CHECK_THROWS_AS(weak_norm_report(unset, budget, ms), PreconditionError);
}

TEST_CASE("weak-norm single leaf and all-below cases") {
  Partition part;
  part.eta = 0.25;
  part.nu = 0.5;
  part.tau_eff = 1.0;
  PartitionLeaf leaf;
  leaf.box.eps = 0.5;
  leaf.box.time_length = 0.5;
  leaf.omega_tilde = -8.0;  // |nu omega| = 4
  part.leaves.push_back(leaf);
  const WeakNormReport r = weak_norm_report(part, 2.0, {1.0, 3.999, 4.0, 10.0});
  CHECK(r.entries[0].measure == 0.5);
  CHECK(r.entries[1].measure == 0.5);
  CHECK(r.entries[2].measure == 0.0);
  CHECK(r.entries[3].measure == 0.0);
  CHECK(r.entries[0].rho == doctest::Approx(0.5 * 1.0 * 0.5 / 2.0));
  CHECK(r.c_emp == doctest::Approx(0.5 * std::pow(3.999, 1.5) * 0.5 / 2.0));

  part.leaves[0].omega_tilde = 0.1;
  const WeakNormReport zero = weak_norm_report(part, 2.0, default_thresholds(part, 6));
  CHECK(zero.c_emp == 0.0);
  for (const WeakNormEntry& e : zero.entries) CHECK(e.measure == 0.0);

  part.leaves[0].unresolved = true;
  part.leaves[0].omega_tilde = 1e6;
  const WeakNormReport skip = weak_norm_report(part, 2.0, {1.0});
  CHECK(skip.excluded_leaves == 1);
  CHECK(skip.excluded_measure == 0.5);
  CHECK(skip.entries[0].measure == 0.0);
  CHECK_THROWS_AS(default_thresholds(part, 0), PreconditionError);
}
