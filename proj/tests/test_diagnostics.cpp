#include <cmath>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "suctionlab/diagnostics.hpp"
#include "suctionlab/errors.hpp"
#include "suctionlab/exact.hpp"
#include "suctionlab/operators.hpp"
#include "suctionlab/solver.hpp"

using namespace suctionlab;

namespace {

// Stationary suction layer sampled on a channel grid deep enough (h = 1 >> nu/U) that the top wall
// sees a vanishing profile.
struct Sampled {
  SimulationParams params;
  std::shared_ptr<const Grid> grid;
  StaggeredField field;
};

Sampled stationary(double nu, double v_star, int n_y, double first_cell) {
  Sampled s;
  s.params = oracle::canonical(nu);
  s.params.v_star = s.params.v_bar = v_star;
  s.grid = oracle::fine_grid(s.params, 4, n_y, first_cell);
  s.field = StaggeredField(s.grid);
  const SimulationParams p = s.params;
  fill_velocity(s.field, [&p](double, double y) { return exact::halfspace_stationary(p, y); }, WallData::canonical(p));
  return s;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("gradient field examples") {
  auto g = oracle::fine_grid(oracle::canonical(0.05), 4, 32, 0.005);
  StaggeredField c(g);
  fill_velocity(c, [](double, double) { return Vec2{0.4, -1.0}; }, {0.4, -1.0, 0.4, -1.0});
  for (double x : gradient_field(c)) CHECK(x == doctest::Approx(0.0).scale(1.0));

  const double sigma = 2.5;
  StaggeredField shear(g);
  fill_velocity(shear, [&](double, double y) { return Vec2{sigma * y, 0.0}; }, {0.0, 0.0, sigma * g->h, 0.0});
  for (double x : gradient_field(shear)) CHECK(x == doctest::Approx(sigma * sigma).epsilon(1e-12));

  // (V U / nu)^2 e^{-2 U y / nu}, second order under refinement.
  auto error = [](int n_y) {
    SimulationParams p = oracle::canonical(0.1);
    std::vector<double> faces(n_y + 1);
    for (int j = 0; j <= n_y; ++j) faces[j] = static_cast<double>(j) / n_y;
    auto ug = std::make_shared<const Grid>(grid_from_faces(1.0, 4, faces, 1.0));
    StaggeredField f(ug);
    fill_velocity(f, [&p](double, double y) { return exact::halfspace_stationary(p, y); }, WallData::canonical(p));
    const auto grad = gradient_field(f);
    const double k = p.u_star / p.nu;
    double e = 0.0;
    for (int j = 0; j < n_y - 1; ++j) {
      const double expected = k * k * std::exp(-2.0 * k * ug->y_centers[j]);
      e = std::max(e, std::abs(grad[j * 4] - expected));
    }
    return e;
  };
  const double e1 = error(128), e2 = error(256);
  CHECK(std::log2(e1 / e2) > 1.8);
}

TEST_CASE("layer dissipation") {
  const Sampled s = stationary(0.01, 1.0, 128, 2e-4);
  const auto grad = gradient_field(s.field);
  const double total = s.params.nu * total_enstrophy(s.field, grad);
  CHECK(layer_dissipation(s.field, grad, s.params.nu, 2.0) == doctest::Approx(total).epsilon(1e-14));
  CHECK(layer_dissipation(s.field, grad, s.params.nu, s.params.h) == doctest::Approx(total).epsilon(1e-14));

  const double expected = exact::stationary_dissipation_rate(s.params) * exact::layer_dissipation_fraction(1.0);
  CHECK(rel(layer_dissipation(s.field, s.params.nu, s.params.nu / s.params.u_star), expected) < 5e-3);

  const double first = layer_dissipation(s.field, grad, s.params.nu, s.grid->y_faces[1]);
  CHECK(layer_dissipation(s.field, grad, s.params.nu, 0.3 * s.grid->y_faces[1]) <= first);

  // Monotone, and continuous across faces.
  double previous = 0.0;
  for (int k = 1; k <= 400; ++k) {
    const double w = 0.05 * k / 400.0;
    const double value = layer_dissipation(s.field, grad, s.params.nu, w);
    CHECK(value >= previous);
    previous = value;
  }
  for (int j = 1; j < 20; ++j) {
    const double face = s.grid->y_faces[j];
    const double below = layer_dissipation(s.field, grad, s.params.nu, face * (1.0 - 1e-9));
    const double above = layer_dissipation(s.field, grad, s.params.nu, face * (1.0 + 1e-9));
    CHECK(std::abs(above - below) < 1e-6 * total);
  }
  CHECK_THROWS_AS(layer_dissipation(s.field, grad, s.params.nu, 0.0), PreconditionError);
}

TEST_CASE("layer separation") {
  const Sampled s = stationary(0.01, 1.0, 128, 2e-4);
  const EulerReference euler(s.params);
  const StaggeredField e = euler_reference_field(euler, s.grid);
  CHECK(layer_separation(e, euler) == 0.0);
  const double expected = s.params.nu * s.params.l_x * s.params.v_star * s.params.v_star / (2.0 * s.params.u_star);
  CHECK(expected == doctest::Approx(2.0 * exact::stationary_energy(s.params)));
  CHECK(rel(layer_separation(s.field, euler), expected) < 1e-3);

  const Sampled four = stationary(0.01, 4.0, 128, 2e-4);
  CHECK(layer_separation(four.field, EulerReference(four.params)) ==
        doctest::Approx(16.0 * layer_separation(s.field, euler)).epsilon(1e-12));

  auto other = oracle::fine_grid(s.params, 4, 64, 1e-3);
  CHECK_THROWS_AS(layer_separation(s.field, euler_reference_field(euler, other)), PreconditionError);
}

TEST_CASE("Kato integral") {
  const Sampled s = stationary(0.01, 1.0, 128, 2e-4);
  const double expected = exact::stationary_dissipation_rate(s.params) * exact::layer_dissipation_fraction(1.0);
  CHECK(rel(kato_integral(s.field, s.params.nu, 1.0 / s.params.u_star), expected) < 5e-3);

  SimulationParams still = s.params;
  still.v_star = still.v_bar = 0.0;
  StaggeredField zero(s.grid);
  fill_velocity(zero, [](double, double) { return Vec2{0.0, -1.0}; }, WallData::canonical(still));
  CHECK(kato_integral(zero, s.params.nu, 1.0) == 0.0);

  double previous = 0.0;
  for (double c : {0.1, 0.5, 1.0, 2.0, 10.0, 60.0}) {
    const double value = kato_integral(s.field, s.params.nu, c);
    CHECK(value >= previous);
    previous = value;
  }
  CHECK_THROWS_AS(kato_integral(s.field, s.params.nu, 0.0), PreconditionError);
}

TEST_CASE("boundary work and suction flux") {
  const Sampled s = stationary(0.01, 1.0, 128, 1e-4);
  const double expected = s.params.l_x * s.params.u_star * s.params.v_star * s.params.v_star;
  CHECK(rel(boundary_work(s.field, s.params), expected) < 1e-3);
  CHECK(boundary_work(s.field, s.params) == doctest::Approx(2.0 * exact::stationary_dissipation_rate(s.params)).epsilon(1e-3));

  SimulationParams still = s.params;
  still.v_star = still.v_bar = 0.0;
  StaggeredField zero(s.grid);
  fill_velocity(zero, [](double, double) { return Vec2{0.0, -1.0}; }, WallData::canonical(still));
  CHECK(boundary_work(zero, still) == 0.0);

  // Even in V*: flip the tangential data and the field together.
  SimulationParams flipped = s.params;
  flipped.v_star = -s.params.v_star;
  StaggeredField mirror(s.grid);
  fill_velocity(mirror, [&flipped](double, double y) { return Vec2{flipped.v_star * std::exp(-y / flipped.nu), -1.0}; },
                WallData::canonical(flipped));
  CHECK(boundary_work(mirror, flipped) == doctest::Approx(boundary_work(s.field, s.params)).epsilon(1e-14));

  CHECK(suction_flux(SimulationParams::unit()) == 0.5);
  CHECK(suction_flux(oracle::prandtl(0.1)) == 0.0);
  // Sufficient suction with gamma = 1/2: T * flux = gamma S T u_bar v_bar^2.
  SimulationParams p = oracle::canonical(0.01);
  p.u_star = p.u_bar = 1.7;
  p.v_star = p.v_bar = 0.6;
  p.l_x = 2.0;
  const double t = 3.0;
  CHECK(t * suction_flux(p) == doctest::Approx(p.gamma * p.l_x * t * p.u_bar * p.v_bar * p.v_bar));
}

TEST_CASE("steady-state balance on a converged run") {
  // Layer-aligned grid with 48 cells in the layer; dy0 / delta below 1%.
  SimulationParams p = oracle::canonical(0.01);
  const Grid g = build_layer_aligned_grid(p, 4, 160, 48);
  REQUIRE(g.dy[0] / layer_width(p) < 0.01);
  const auto records = run(p, g, 20.0 * p.nu / (p.u_star * p.u_star), 0.05);
  const DiagnosticsRecord& r = records.back();
  CHECK(r.boundary_work_rate == doctest::Approx(2.0 * r.dissipation_rate).epsilon(0.01));
  CHECK(r.suction_flux == doctest::Approx(r.dissipation_rate).epsilon(0.01));
  CHECK(r.layer_dissipation_rate <= r.dissipation_rate);
  for (const auto& rec : records) {
    CHECK(rec.layer_dissipation_rate <= rec.dissipation_rate);
    CHECK(rec.dissipation_rate >= 0.0);
    CHECK(rec.kato_integral_rate >= 0.0);
    CHECK(std::isfinite(rec.boundary_work_rate));
  }
}

TEST_CASE("trace norm in L4/3") {
  const double dx = 0.25, g = -3.0;
  std::vector<WallGradientSample> samples;
  for (int k = 0; k <= 10; ++k) samples.push_back({0.1 * k, std::vector<double>(4, g)});
  const double tau = 0.2, t_end = 1.0;
  CHECK(trace_l43_accumulate(samples, dx, tau, t_end) ==
        doctest::Approx(std::abs(g) * std::pow((t_end - tau) * 1.0, 0.75)).epsilon(1e-12));
  auto doubled = samples;
  for (auto& s : doubled)
    for (double& x : s.gradient) x *= 2.0;
  CHECK(trace_l43_accumulate(doubled, dx, tau, t_end) ==
        doctest::Approx(2.0 * trace_l43_accumulate(samples, dx, tau, t_end)).epsilon(1e-12));

  const Sampled s = stationary(0.01, 1.0, 128, 1e-4);
  const auto wall = wall_gradient(s.field);
  std::vector<WallGradientSample> steady;
  for (int k = 0; k <= 4; ++k) steady.push_back({0.5 + 0.5 * k, wall});
  const double expected = s.params.v_star * s.params.u_star / s.params.nu * std::pow((2.5 - 0.5) * s.params.l_x, 0.75);
  CHECK(rel(trace_l43_accumulate(steady, s.grid->dx, 0.5, 2.5), expected) < 1e-3);

  CHECK_THROWS_AS(trace_l43_accumulate(samples, dx, 0.0, 1.0), PreconditionError);
  CHECK_THROWS_AS(trace_l43_accumulate(samples, dx, 0.42, 0.48), PreconditionError);

  TraceAccumulator acc(dx, tau);
  for (const auto& sample : samples) acc.add(sample.time, sample.gradient);
  CHECK(acc.value() == doctest::Approx(trace_l43_accumulate(samples, dx, tau, t_end)).epsilon(1e-14));
}

TEST_CASE("average layer gradient") {
  const Sampled s = stationary(0.01, 1.0, 128, 2e-4);
  const double scale = s.params.u_bar * s.params.v_bar / s.params.nu;
  const double expected = scale * std::sqrt((1.0 - std::exp(-2.0)) / 2.0);
  CHECK(expected / scale == doctest::Approx(0.6576).epsilon(1e-4));
  CHECK(rel(avg_layer_gradient(s.field, s.params), expected) < 5e-3);

  const Sampled half = stationary(0.005, 1.0, 128, 1e-4);
  CHECK(avg_layer_gradient(half.field, half.params) ==
        doctest::Approx(2.0 * avg_layer_gradient(s.field, s.params)).epsilon(5e-3));

  SimulationParams still = s.params;
  still.v_star = still.v_bar = 0.0;
  StaggeredField zero(s.grid);
  fill_velocity(zero, [](double, double) { return Vec2{0.0, -1.0}; }, WallData::canonical(still));
  CHECK(avg_layer_gradient(zero, still) == 0.0);
  CHECK_THROWS_AS(avg_layer_gradient(zero, oracle::prandtl(0.01)), PreconditionError);
}

TEST_CASE("records CSV round trip") {
  const SimulationParams p = oracle::canonical(0.05);
  const auto records = run(p, build_grid(p, 4, 32), 0.2, 0.05);
  std::stringstream ss;
  write_records_csv(ss, records);
  std::string header;
  std::getline(std::stringstream(ss.str()), header);
  CHECK(header.rfind("time,energy,enstrophy,dissipation_rate,layer_dissipation_rate,layer_separation_sq,"
                     "kato_integral_rate,boundary_work_rate,suction_flux,avg_layer_gradient,trace_l43",
                     0) == 0);
  const auto back = read_records_csv(ss);
  REQUIRE(back.size() == records.size());
  for (std::size_t k = 0; k < back.size(); ++k) CHECK(record_values(back[k]) == record_values(records[k]));

  std::stringstream broken("time,energy\n1,2\n");
  CHECK_THROWS_AS(read_records_csv(broken), FormatError);
}
