#include "preb/errors.hpp"
#include "preb/negf.hpp"
#include "preb/pipeline.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace preb;

namespace {

ChainCoefficients chain_of(std::vector<double> eps, std::vector<double> hop)
{
    ChainCoefficients c;
    c.eps = std::move(eps);
    c.hop = std::move(hop);
    update_tail(c);
    return c;
}

RunConfig with_tau(RunConfig cfg, double tau)
{
    cfg.process.tau = tau;
    return cfg;
}

} // namespace

TEST_CASE("spectral function values")
{
    auto a = SpectralFunction::lorentzian(2.0, 1.0, 2.0, 6.0);
    CHECK(a(2.0) == doctest::Approx(2.0));
    CHECK(a(7.0) == 0.0);
    auto b = SpectralFunction::lorentzian(2.0, 0.5, 2.0, 6.0);
    CHECK(b(2.5) == doctest::Approx(2.0));
    CHECK(evaluate_spectral(b, 2.5) == b(2.5));
}

TEST_CASE("fermi occupation values")
{
    CHECK(fermi_occupation({1.0, -2.0}, -2.0) == 0.5);
    CHECK(std::abs(fermi_occupation({1e6, 0.0}, -1.0) - 1.0) < 1e-12);
    CHECK(fermi_occupation({1.0, 0.0}, 1.0) == doctest::Approx(1.0 / (std::exp(1.0) + 1.0)).epsilon(1e-15));
}

TEST_CASE("Hilbert transform of zero, even and flat inputs")
{
    std::vector<double> w;
    for (int i = -400; i <= 400; ++i)
        w.push_back(i * 0.01);
    std::vector<double> zero(w.size(), 0.0);
    for (double h : hilbert_transform(w, zero))
        CHECK(h == 0.0);

    std::vector<double> even(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        even[i] = std::exp(-w[i] * w[i]) * (1.0 - std::abs(w[i]) / 4.0);
    auto h = hilbert_transform(w, even);
    for (std::size_t i = 0; i < w.size(); ++i)
        CHECK(std::abs(h[i] + h[w.size() - 1 - i]) < 1e-10);

    // flat band sampled with one zero node beyond each edge
    const double gamma = 0.7;
    const double cutoff = 3.0;
    std::vector<double> flat(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        flat[i] = std::abs(w[i]) <= cutoff + 1e-12 ? gamma : 0.0;
    auto hf = hilbert_transform(w, flat);
    auto sf = SpectralFunction::flat(gamma, cutoff);
    for (double x : {-2.0, -0.5, 0.0, 1.0, 2.5}) {
        auto i = static_cast<std::size_t>(std::lround((x + 4.0) / 0.01));
        double exact = gamma / std::numbers::pi * std::log(std::abs((x + cutoff) / (x - cutoff)));
        CHECK(hilbert_exact(sf, x) == doctest::Approx(exact).epsilon(1e-14));
        // the sampled step edge costs first-order grid error
        double grid_error = gamma / std::numbers::pi * 0.005 * (1.0 / (cutoff - x) + 1.0 / (cutoff + x));
        CHECK(std::abs(hf[i] - exact) < grid_error);
    }
}

TEST_CASE("chain mapping golden values")
{
    auto sf = SpectralFunction::lorentzian(2.0, 0.01, 2.0, 6.0);
    ChainCoefficients r = chain_map_recursion(sf, 1);
    CHECK(r.hop[0] == doctest::Approx(1.0).epsilon(0.02));
    CHECK(r.eps[0] == doctest::Approx(2.0).epsilon(0.02));
    std::size_t peak = 0;
    for (std::size_t i = 0; i < r.residual_omega.size(); ++i)
        if (std::abs(r.residual_omega[i] - 2.0) < std::abs(r.residual_omega[peak] - 2.0))
            peak = i;
    CHECK(r.residual_J[peak] == doctest::Approx(0.02).epsilon(0.02));
    ChainCoefficients t = chain_map_tridiag(sf, 8192, 1);
    CHECK(t.hop[0] == doctest::Approx(1.0).epsilon(0.02));
    CHECK(t.eps[0] == doctest::Approx(2.0).epsilon(0.02));

    auto even = SpectralFunction::lorentzian(2.0, 0.3, 0.0, 6.0);
    for (double e : chain_map_recursion(even, 8).eps)
        CHECK(std::abs(e) < 1e-8);
    for (double e : chain_map_tridiag(even, 8192, 8).eps)
        CHECK(std::abs(e) < 1e-8);
}

TEST_CASE("flat band: recursion and tridiagonalization agree")
{
    auto sf = SpectralFunction::flat(0.5, 2.0);
    ChainCoefficients r = chain_map_recursion(sf, 9);
    ChainCoefficients t = chain_map_tridiag(sf, 20000, 9);
    CHECK(r.hop[0] * r.hop[0] == doctest::Approx(0.5 * 2.0 / std::numbers::pi).epsilon(1e-10));
    for (std::size_t p = 0; p <= 8; ++p)
        CHECK(r.hop[p] == doctest::Approx(t.hop[p]).epsilon(1e-4));
}

TEST_CASE("single discrete mode is already a chain")
{
    std::vector<double> e{1.7};
    std::vector<double> w{0.09};
    ChainCoefficients c = lanczos_chain(e, w, 4);
    REQUIRE(c.depth() == 1);
    CHECK(c.terminated);
    CHECK(c.eps[0] == doctest::Approx(1.7));
    CHECK(c.hop[0] == doctest::Approx(0.3));
}

TEST_CASE("chain length examples")
{
    CHECK(chain_length_for_tau(3.0, 1.0, 5) == 8);
    CHECK(chain_length_for_tau(3.0, 1e-9, 5) == 6);
    CHECK(chain_length_for_tau(2.5, 2.0, 0) == 5);
}

TEST_CASE("one-site chains give the documented layout")
{
    SetupHamiltonian h = assemble_hamiltonian(SystemSpec::two_site(0.8), {chain_of({1.5}, {0.3}), chain_of({-0.5}, {0.6})}, 1);
    RMatrix expect = RMatrix::Zero(4, 4);
    expect(0, 1) = expect(1, 0) = 0.8;
    expect(0, 2) = expect(2, 0) = 0.3;
    expect(2, 2) = 1.5;
    expect(1, 3) = expect(3, 1) = 0.6;
    expect(3, 3) = -0.5;
    CHECK(h.matrix == expect);

    SetupHamiltonian d = assemble_hamiltonian(SystemSpec::two_site(), {chain_of({1.0, 1.0}, {0.0, 1.0}), chain_of({1.0, 1.0}, {0.0, 1.0})}, 2);
    CHECK(d.matrix.block(0, 2, 2, 4).isZero(0.0));

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 5; ++k) {
        std::vector<double> e(5);
        std::vector<double> g(5);
        for (int i = 0; i < 5; ++i) {
            e[static_cast<std::size_t>(i)] = u(rng);
            g[static_cast<std::size_t>(i)] = std::abs(u(rng)) + 0.1;
        }
        SetupHamiltonian r = assemble_hamiltonian(SystemSpec::two_site(u(rng)), {chain_of(e, g), chain_of(g, e)}, 5);
        CHECK(max_abs(RMatrix(r.matrix - r.matrix.transpose())) == 0.0);
    }
}

TEST_CASE("thermal correlation examples")
{
    RMatrix h(2, 2);
    h << 0.0, 1.0, 1.0, 0.5;
    CorrelationMatrix full = thermal_correlation(h, {1e8, 10.0});
    CHECK(max_abs(CMatrix(full - CMatrix::Identity(2, 2))) < 1e-14);
    RMatrix one(1, 1);
    one << 0.4;
    CHECK(thermal_correlation(one, {2.0, 0.1})(0, 0).real() == doctest::Approx(fermi_occupation({2.0, 0.1}, 0.4)));

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    RMatrix chain = RMatrix::Zero(6, 6);
    for (int i = 0; i < 6; ++i) {
        chain(i, i) = u(rng);
        if (i + 1 < 6)
            chain(i, i + 1) = chain(i + 1, i) = u(rng);
    }
    Eigen::SelfAdjointEigenSolver<RMatrix> es(chain);
    double sum = 0.0;
    for (int k = 0; k < 6; ++k)
        sum += fermi_occupation({1.3, 0.2}, es.eigenvalues()(k));
    CHECK(thermal_correlation(chain, {1.3, 0.2}).trace().real() == doctest::Approx(sum).epsilon(1e-13));
}

TEST_CASE("copy count and rethermalization examples")
{
    CHECK(copies_required(0.5, 1.0) == 2);
    CHECK(copies_required(1.5, 1.0) == 3);
    CHECK(copies_required(2.0, 1.0) == 3);
    CHECK(rethermalization_estimate(0.5, 10.0) == doctest::Approx(10.0));
    CHECK(rethermalization_estimate(0.05, 10.0) == doctest::Approx(100.0));
    CHECK(rethermalization_estimate(0.2, 1.0) == doctest::Approx(1.0 / 0.4));
}

TEST_CASE("propagator examples")
{
    RMatrix d = RMatrix::Zero(3, 3);
    d.diagonal() << 0.3, -1.2, 2.0;
    SetupSpectrum s(d);
    CMatrix u = s.propagator(0.7);
    for (int p = 0; p < 3; ++p)
        CHECK(std::abs(u(p, p) - std::exp(cplx(0.0, -d(p, p) * 0.7))) < 1e-15);
    CHECK(max_abs(CMatrix(u - CMatrix(u.diagonal().asDiagonal()))) == 0.0);
    CHECK(max_abs(CMatrix(s.propagator(0.0) - CMatrix::Identity(3, 3))) < 1e-15);

    Setup setup = build_setup(heat_engine_preset(0.1));
    SetupSpectrum full(setup.hamiltonian.matrix);
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> t(0.0, 5.0);
    for (int k = 0; k < 3; ++k) {
        double t1 = t(rng);
        double t2 = t(rng);
        CHECK(max_abs(CMatrix(full.propagator(t1) * full.propagator(t2) - full.propagator(t1 + t2))) < 1e-10);
    }
}

TEST_CASE("drive matrix examples")
{
    SetupHamiltonian h = assemble_hamiltonian(SystemSpec::two_site(), {chain_of({1.0, 1.0, 1.0}, {0.7, 1.0, 1.0}), chain_of({-1.0, -1.0, -1.0}, {0.4, 1.0, 1.0})}, 3);
    StepPropagator p = step_propagator(h, 1.1);
    CMatrix zero = CMatrix::Zero(3, 3);
    CMatrix one = CMatrix::Identity(3, 3);
    CHECK(drive_matrix(p, zero, zero).value.isZero(0.0));
    CMatrix gs = p.system_block();
    CHECK(max_abs(CMatrix(drive_matrix(p, one, one).value - (CMatrix::Identity(2, 2) - gs.adjoint() * gs))) < 1e-10);

    SetupHamiltonian dec = assemble_hamiltonian(SystemSpec::two_site(), {chain_of({1.0, 1.0}, {0.0, 1.0}), chain_of({1.0, 1.0}, {0.0, 1.0})}, 2);
    StepPropagator q = step_propagator(dec, 1.1);
    auto cb = thermal_correlation(dec.bath_block(0), {1.0, 0.0});
    CHECK(drive_matrix(q, cb, cb).value.isZero(1e-15));
    StabilityRate r = stability_rate(q.system_block(), 1.1);
    CHECK(r.radius == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(r.rate) < 1e-12);
}

TEST_CASE("Lyapunov solver examples")
{
    CMatrix p = CMatrix::Identity(2, 2);
    CHECK(max_abs(CMatrix(solve_dlyap_direct(CMatrix::Zero(2, 2), p) - p)) == 0.0);
    CHECK(max_abs(CMatrix(solve_dlyap_doubling(CMatrix::Zero(2, 2), p) - p)) == 0.0);
    CMatrix half = 0.5 * CMatrix::Identity(2, 2);
    CHECK(max_abs(CMatrix(solve_dlyap_direct(half, p) - (4.0 / 3.0) * p)) < 1e-14);
    CHECK(max_abs(CMatrix(solve_dlyap_doubling(half, p) - (4.0 / 3.0) * p)) < 1e-14);

    StabilityRate r = stability_rate(half, 1.0);
    CHECK(r.rate == doctest::Approx(std::log(2.0)));

    // near-critical map
    CMatrix g = CMatrix::Zero(2, 2);
    g(0, 0) = 1.0 - 1e-6;
    g(0, 1) = 0.3;
    g(1, 1) = cplx(0.0, 0.5);
    CMatrix q(2, 2);
    q << 1.0, 0.2, 0.2, 0.5;
    CorrelationMatrix c = solve_dlyap_doubling(g, q);
    CHECK(std::isfinite(c.norm()));
    CHECK(c.norm() > 1e5);
    CHECK(lyapunov_residual(c, g, q) < 1e-8 * c.norm());

    Setup s = build_setup(heat_engine_preset(0.1));
    CorrelationMatrix ness = solve_ness(s.propagator.system_block(), s.drive.value);
    CorrelationMatrix it = CorrelationMatrix::Zero(2, 2);
    for (int k = 0; k < 100000; ++k) {
        CorrelationMatrix next = preb_step(it, s.propagator, s.drive);
        double change = max_abs(CMatrix(next - it));
        it = next;
        if (change < 1e-12)
            break;
    }
    CHECK(max_abs(CMatrix(it - ness)) < 1e-8);
}

TEST_CASE("step map examples")
{
    Setup s = build_setup(heat_engine_preset(0.3));
    CorrelationMatrix one = preb_step(CorrelationMatrix::Zero(2, 2), s.propagator, s.drive);
    CHECK(one == s.drive.value);
    Trajectory t = preb_trajectory(CorrelationMatrix::Zero(2, 2), 1, s.propagator, s.drive);
    CHECK(t.states[0] == one);

    SetupHamiltonian dec = assemble_hamiltonian(SystemSpec::two_site(), {chain_of({1.0, 1.0}, {0.0, 1.0}), chain_of({1.0, 1.0}, {0.0, 1.0})}, 2);
    StepPropagator q = step_propagator(dec, 0.9);
    DriveMatrix none{CMatrix::Zero(2, 2), 0.0};
    CorrelationMatrix c(2, 2);
    c << 0.7, cplx(0.1, 0.2), cplx(0.1, -0.2), 0.4;
    CHECK(std::abs(preb_step(c, q, none).trace().real() - c.trace().real()) < 1e-12);
}

TEST_CASE("distance to the steady state decays with the squared radius")
{
    Setup s = build_setup(heat_engine_preset(0.3));
    Trajectory t = preb_trajectory(CorrelationMatrix::Zero(2, 2), 40, s.propagator, s.drive);
    StabilityRate r = stability_rate(s.propagator.system_block(), 1.0);
    double slope = (std::log(t.distance_to_ness[30]) - std::log(t.distance_to_ness[10])) / 20.0;
    CHECK(slope == doctest::Approx(2.0 * std::log(r.radius)).epsilon(0.02));
}

TEST_CASE("long refresh times approach the continuous-time occupations")
{
    RunConfig cfg = with_tau(heat_engine_preset(1.0), 20.0);
    Setup s = build_setup(cfg);
    Trajectory t = preb_trajectory(CorrelationMatrix::Zero(2, 2), 60, s.propagator, s.drive);
    NegfReport n = landauer_currents(cfg.system, {cfg.baths[0].spectral, cfg.baths[1].spectral}, s.specs());
    for (int i = 0; i < 2; ++i)
        CHECK(t.states.back()(i, i).real() == doctest::Approx(n.occupations[static_cast<std::size_t>(i)]).epsilon(0.02));
}

TEST_CASE("step thermodynamics examples")
{
    // thermal start with equal baths: only the switching work of the coupling remains,
    // independent of the chain length and vanishing with the coupling strength
    for (double kappa : {2.0, 2e-6}) {
        std::array<double, 2> sigma{};
        for (int k = 0; k < 2; ++k) {
            RunConfig cfg = equal_bath_preset(0.3);
            for (auto& b : cfg.baths)
                b.spectral = SpectralFunction::lorentzian(kappa, 0.3, b.spectral.center(), 6.0);
            cfg.process.l0 = k == 0 ? 10 : 80;
            Setup s = build_setup(cfg);
            CorrelationMatrix c = thermal_correlation(cfg.system.hamiltonian, cfg.baths[0].thermal);
            StepThermo t = step_thermodynamics(c, s.hamiltonian, s.propagator, s.thermal, s.specs());
            CHECK(t.Sigma > 0.0);
            CHECK(t.Sigma <= cfg.baths[0].thermal.beta * t.W_ext);
            sigma[static_cast<std::size_t>(k)] = t.Sigma;
        }
        CHECK(sigma[1] == doctest::Approx(sigma[0]).epsilon(1e-6));
        if (kappa < 1e-3)
            CHECK(sigma[1] < 1e-6);
    }

    Setup s = build_setup(heat_engine_preset(0.2));
    CorrelationMatrix c(2, 2);
    c << 0.6, cplx(0.05, 0.1), cplx(0.05, -0.1), 0.3;
    StepThermo t = step_thermodynamics(c, s.hamiltonian, s.propagator, s.thermal, s.specs());
    double energy = t.delta_U + t.dH_B[0] + t.dH_B[1] + t.dH_SB[0] + t.dH_SB[1];
    CHECK(std::abs(energy) < 1e-10);
    CHECK(std::abs(t.dN_S + t.dN_B[0] + t.dN_B[1]) < 1e-10);
}

TEST_CASE("entropy examples")
{
    CorrelationMatrix c = CorrelationMatrix::Zero(1, 1);
    c(0, 0) = 0.2679;
    double nu = 0.2679;
    CHECK(gaussian_entropy(c) == doctest::Approx(-nu * std::log(nu) - (1 - nu) * std::log(1 - nu)));
    c(0, 0) = 1.0 / (std::exp(1.0) + 1.0);
    CHECK(gaussian_entropy(c) == doctest::Approx(0.582203).epsilon(1e-5));
}

TEST_CASE("cumulative thermodynamics examples")
{
    Setup s = build_setup(heat_engine_preset(0.2));
    std::vector<StepThermo> steps;
    CorrelationMatrix c = CorrelationMatrix::Zero(2, 2);
    double sigma = 0.0;
    for (int m = 0; m < 300; ++m) {
        steps.push_back(step_thermodynamics(c, s.hamiltonian, s.propagator, s.thermal, s.specs()));
        c = steps.back().C_S_end;
        double next = cumulative_thermo(steps, 1.0).Sigma;
        CHECK(next >= sigma - 1e-14);
        sigma = next;
    }
    ThermoTotals first = cumulative_thermo(std::span(steps).first(1), 1.0);
    CHECK(first.W_ext == steps[0].W_ext);
    CHECK(first.Q[1] == steps[0].Q[1]);
    CHECK(first.Sigma == steps[0].Sigma);

    NessReport r = run_ness(heat_engine_preset(0.2));
    ThermoTotals late = cumulative_thermo(std::span(steps).subspan(200), 1.0);
    CHECK(late.P_ext_rate == doctest::Approx(r.P_ext).epsilon(1e-6));
    CHECK(late.Q_rate[0] == doctest::Approx(r.Qdot[0]).epsilon(1e-6));
    CHECK(late.Sigma_rate == doctest::Approx(r.sigma).epsilon(1e-6));
}

TEST_CASE("steady-state examples")
{
    NessReport eq = run_ness(equal_bath_preset(0.1));
    CHECK(eq.P_ext >= -1e-10);
    CHECK(eq.P_chem == 0.0);
    NessReport he = run_ness(heat_engine_preset(0.05));
    CHECK(he.P_chem == 0.0);
    CHECK(he.P_ext < 0.0);
    CHECK(he.Qdot[0] < 0.0);
    CHECK(he.regime == Regime::heat_engine);
    CHECK(run_ness(refrigerator_preset(0.05)).regime == Regime::refrigerator);
    CHECK(carnot_references(0.4, 1.0).eta_ca / carnot_references(0.4, 1.0).eta_c == doctest::Approx(0.6126).epsilon(1e-4));

    CollisionalPrediction h = collisional_limit(2.0, -1.0, -2.0, 0.1, 1.0);
    CHECK(h.eta0 / carnot_references(0.1, 1.0).eta_c == doctest::Approx(0.75 / 0.9));
    CollisionalPrediction f = collisional_limit(2.0, -1.0, -2.0, 0.7, 1.0);
    CHECK(f.cop0 / carnot_references(0.7, 1.0).cop_c == doctest::Approx(1.0 / 7.0));
}

TEST_CASE("tight coupling holds for narrow baths only")
{
    NessReport narrow = run_ness(heat_engine_preset(1e-3));
    auto d = tight_coupling_check(narrow, {2.0, -1.0}, -2.0);
    CHECK(d[0] < 0.02 * std::abs(narrow.Qdot[0]));
    CHECK(d[1] < 0.02 * std::abs(narrow.Qdot[1]));
    NessReport broad = run_ness(heat_engine_preset(2.0));
    auto b = tight_coupling_check(broad, {2.0, -1.0}, -2.0);
    CHECK(b[0] > 0.1 * std::abs(broad.Qdot[0]));
    NessReport zero;
    auto z = tight_coupling_check(zero, {2.0, -1.0}, -2.0);
    CHECK(z[0] == 0.0);
    CHECK(z[1] == 0.0);
}

TEST_CASE("self-energy examples")
{
    auto flat = SpectralFunction::flat(0.6, 2.0);
    CHECK(lead_self_energy(flat, 3.0).imag() == 0.0);
    CHECK(-lead_self_energy(flat, 0.5).imag() == doctest::Approx(0.6 / 2.0));
    auto lor = SpectralFunction::lorentzian(2.0, 0.01, 2.0, 6.0);
    CHECK(-lead_self_energy(lor, 2.0).imag() == doctest::Approx(2.0 / 0.01 / 2.0).epsilon(1e-6));
}

TEST_CASE("landauer examples")
{
    auto a = SpectralFunction::lorentzian(2.0, 0.3, 2.0, 6.0);
    NegfReport eq = landauer_currents(SystemSpec::two_site(), {a, a}, {BathThermalSpec{0.5, 0.1}, {0.5, 0.1}});
    CHECK(std::abs(eq.I) < 1e-10);
    CHECK(std::abs(eq.J) < 1e-10);

    std::vector<double> w1{-3.0, -2.5, -2.0};
    std::vector<double> w2{2.0, 2.5, 3.0};
    auto l = SpectralFunction::tabulated(w1, {0.0, 1.0, 0.0});
    auto r = SpectralFunction::tabulated(w2, {0.0, 1.0, 0.0});
    LandauerModel m(SystemSpec::two_site(), {l, r});
    for (double w : {-2.5, 0.0, 2.5})
        CHECK(m.transmission(w) == 0.0);
    NegfReport dis = landauer_currents(SystemSpec::two_site(), {l, r}, {BathThermalSpec{0.1, 0.0}, {1.0, 0.0}});
    CHECK(dis.I == 0.0);
    CHECK(dis.J == 0.0);
}

TEST_CASE("zeno regime: the relaxation rate grows with tau at short times")
{
    RunConfig base = heat_engine_preset(0.05);
    double previous = 0.0;
    for (int k = 0; k <= 10; ++k) {
        double tau = 0.01 * std::pow(50.0, k / 10.0);
        double rate = run_ness(with_tau(base, tau)).rate;
        CHECK(rate > previous);
        previous = rate;
    }
}
