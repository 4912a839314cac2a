#include <doctest.h>

#include <random>

#include "wgqed/integrator.hpp"
#include "wgqed/master_equation.hpp"
#include "wgqed/scatter.hpp"

using namespace wgqed;

namespace {

MatrixXc random_density(Eigen::Index dim, unsigned seed)
{
    std::mt19937 gen(seed);
    std::normal_distribution<double> nd;
    MatrixXc a(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = cplx(nd(gen), nd(gen));
    MatrixXc rho = a * a.adjoint();
    return rho / rho.trace();
}

MatrixXc random_matrix(Eigen::Index dim, unsigned seed)
{
    std::mt19937 gen(seed);
    std::normal_distribution<double> nd;
    MatrixXc a(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = cplx(nd(gen), nd(gen));
    return a;
}

// Dense reference for the Liouvillian without drive, written term by term.
MatrixXc reference_free(const MatrixXc& rho, double t, const EmitterArray& arr,
                        const CouplingMatrix& c)
{
    const auto alg = build_algebra(arr.count());
    const int n = arr.count();
    MatrixXc out = MatrixXc::Zero(rho.rows(), rho.cols());
    for (int j = 0; j < n; ++j) {
        const MatrixXc sz(alg.sigma_z(j));
        out += -0.5 * I * modulation_at(arr, j, t) * (sz * rho - rho * sz);
    }
    for (int j = 0; j < n; ++j) {
        for (int l = 0; l < n; ++l) {
            const MatrixXc hop(alg.hop(j, l));
            const MatrixXc sp(alg.sigma_plus(j)), sm(alg.sigma_minus(l));
            out += I * c.lambda(j, l).imag() * (rho * hop - hop * rho);
            out -= c.lambda(j, l).real() * (hop * rho + rho * hop - 2.0 * sm * rho * sp);
        }
    }
    return out;
}

MatrixXc drive_operator(double t, const EmitterArray& arr, const PulseSpec& p)
{
    const auto alg = build_algebra(arr.count());
    MatrixXc s = MatrixXc::Zero(alg.dimension(), alg.dimension());
    for (int j = 0; j < arr.count(); ++j) {
        s += std::sqrt(arr.gamma_wg[j] / 2) * amplitude_at(p, arr, j, t) *
             MatrixXc(alg.sigma_plus(j));
    }
    return s; // S+ ; S- = S+^dagger
}

EmitterArray modulated_trio()
{
    EmitterArray a = EmitterArray::chain(3, 0.17, 1.0, 0.0);
    a.gamma_wg = {1.0, 0.7, 1.3};
    a.gamma_ng = {0.0, 0.2, 0.1};
    a.modulation = {ModulationSpec::sinusoid(3, 2), ModulationSpec::none(),
                    ModulationSpec::sinusoid(1, 5, 0.3)};
    return a;
}

} // namespace

TEST_CASE("pure decay rate of an excited emitter")
{
    for (double g : {0.0, 0.3}) {
        const auto arr = EmitterArray::chain(1, 0.0, 1.0, g);
        const auto c = build_lambda(arr);
        const auto alg = build_algebra(1);
        const MatrixXc rho = alg.product_state({0});
        const MatrixXc d = rhs_coherent(rho, 0.0, arr, c, PulseSpec::coherent(0.0, 1.0));
        CHECK(d(0, 0).real() == doctest::Approx(-(1.0 + g)));
        CHECK(d(1, 1).real() == doctest::Approx(1.0 + g));
    }
}

TEST_CASE("coherent right-hand side against the dense reference")
{
    const auto arr = modulated_trio();
    const auto c = build_lambda(arr);
    const auto p = PulseSpec::coherent(2.5, 0.9, 0.3);
    const MatrixXc rho = random_density(8, 7);
    for (double t : {1.0, 4.7, 6.2}) {
        const MatrixXc s = drive_operator(t, arr, p);
        const MatrixXc h = s + s.adjoint();
        const MatrixXc expect = reference_free(rho, t, arr, c) - I * (h * rho - rho * h);
        const MatrixXc got = rhs_coherent(rho, t, arr, c, p);
        CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(std::abs(got.trace()) < 1e-13);
        CHECK((got - got.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("vacuum right-hand side is the free Liouvillian")
{
    const auto arr = modulated_trio();
    const auto c = build_lambda(arr);
    const MatrixXc rho = random_density(8, 11);
    CHECK((rhs_vacuum(rho, 0.8, arr, c) - reference_free(rho, 0.8, arr, c)).cwiseAbs().maxCoeff() <
          1e-12);
}

TEST_CASE("Fock ladder right-hand side against the dense reference")
{
    // d rho_mn = L0 rho_mn - i sqrt(m) [S+, rho_{m-1,n}] - i sqrt(n) [S-, rho_{m,n-1}]
    const auto arr = modulated_trio();
    const auto c = build_lambda(arr);
    for (int N : {1, 2, 3}) {
        const auto p = PulseSpec::fock(N, 1.1, -0.2);
        DensityLadder ladder(N, 8);
        for (int m = 0; m <= N; ++m) {
            ladder.block(m, m) = random_density(8, 100 + m);
            for (int n = 0; n < m; ++n) ladder.block(m, n) = random_matrix(8, 200 + 10 * m + n);
        }
        const double t = 5.1;
        const MatrixXc sp = drive_operator(t, arr, p), sm = sp.adjoint();
        const DensityLadder got = rhs_ladder(ladder, t, arr, c, p);
        for (int m = 0; m <= N; ++m) {
            for (int n = 0; n <= m; ++n) {
                MatrixXc expect = reference_free(ladder.get(m, n), t, arr, c);
                if (m > 0) {
                    const MatrixXc b = ladder.get(m - 1, n);
                    expect -= I * std::sqrt(double(m)) * (sp * b - b * sp);
                }
                if (n > 0) {
                    const MatrixXc b = ladder.get(m, n - 1);
                    expect -= I * std::sqrt(double(n)) * (sm * b - b * sm);
                }
                CHECK((got.block(m, n) - expect).cwiseAbs().maxCoeff() < 1e-11);
            }
        }
    }
}

TEST_CASE("expectation values")
{
    const auto alg = build_algebra(2);
    const auto ladder = DensityLadder::initial(2, alg.ground_state());
    CHECK(expectation(ladder, MatrixXc(alg.identity())) == cplx(1.0));
    CHECK(expectation(ladder, alg.hop(0, 0)) == cplx(0.0));

    DensityLadder l(1, 2);
    l.block(0, 0) = (MatrixXc(2, 2) << 0.3, 0, 0, 0.7).finished();
    l.block(1, 1) = (MatrixXc(2, 2) << 0.6, 0, 0, 0.4).finished();
    l.block(1, 0) = (MatrixXc(2, 2) << 0, 0.1, 0, 0).finished();
    const auto a1 = build_algebra(1);
    VectorXc c0(2), c1(2);
    c0 << 1, 0;
    c1 << 0, 1;
    CHECK(std::abs(superposition_expectation(l, c0, a1.hop(0, 0)) - 0.3) < 1e-15);
    CHECK(std::abs(superposition_expectation(l, c1, a1.hop(0, 0)) - 0.6) < 1e-15);
}

TEST_CASE("ladder invariants and storage")
{
    const auto alg = build_algebra(2);
    DensityLadder l = DensityLadder::initial(2, alg.product_state({1}));
    CHECK(DensityLadder::block_count(2) == 6);
    CHECK(l.trace_defect() == 0.0);
    CHECK(l.hermiticity_defect() == 0.0);
    CHECK(l.min_eigenvalue() == doctest::Approx(0.0));
    l.block(2, 1)(0, 3) = cplx(0.2, 0.1);
    CHECK(l.get(1, 2)(3, 0) == std::conj(cplx(0.2, 0.1)));
    CHECK_THROWS_AS(l.block(1, 2), ContractError);
}

TEST_CASE("integrator accuracy and dense output")
{
    // y' = (i w - k) y
    const cplx rate(-0.3, 2.0);
    auto f = [&](double, const VectorXc& y, VectorXc& dy) { dy = rate * y; };
    IntegratorConfig cfg;
    cfg.t_final = 10.0;
    for (int k = 0; k <= 100; ++k) cfg.samples.push_back(0.1 * k);
    double worst = 0.0;
    VectorXc y = VectorXc::Constant(1, 1.0);
    auto obs = [&](double t, const VectorXc& v) {
        worst = std::max(worst, std::abs(v(0) - std::exp(rate * t)));
    };
    const auto st = integrate(f, y, 0.0, cfg, obs);
    CHECK(worst < 1e-8);
    CHECK(st.t_end == 10.0);
    CHECK(std::abs(y(0) - std::exp(rate * 10.0)) < 1e-8);
}

TEST_CASE("integrator errors and early stop")
{
    auto f = [](double, const VectorXc& y, VectorXc& dy) { dy = -y; };
    IntegratorConfig cfg;
    cfg.t_final = 5.0;
    cfg.max_steps = 3;
    VectorXc y = VectorXc::Ones(2);
    CHECK_THROWS_AS(integrate(f, y, 0.0, cfg), StiffnessError);

    IntegratorConfig bad;
    bad.rtol = 0;
    bad.t_final = 1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad.rtol = 1e-8;
    bad.samples = {0.5, 2.0};
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    IntegratorConfig ok;
    ok.t_final = 5.0;
    y = VectorXc::Ones(2);
    const auto st = integrate(f, y, 0.0, ok, {}, [](double t, const VectorXc&) { return t < 1; });
    CHECK(st.stopped_early);
    CHECK(st.t_end >= 1.0);
    CHECK(st.t_end < 5.0);
}

TEST_CASE("coherent drive with zero photons equals the vacuum flow")
{
    Scenario a;
    a.array = EmitterArray::chain(2, 0.3);
    a.pulse = PulseSpec::coherent(0.0, 1.0);
    a.initially_excited = {0};
    a.adaptive_final = false;
    a.integrator.t_final = 8.0;
    Scenario b = a;
    b.pulse = PulseSpec::vacuum();
    b.sample_dt = sample_step(a);
    const auto ra = run_scatter(a), rb = run_scatter(b);
    REQUIRE(ra.t.size() == rb.t.size());
    CHECK((ra.populations - rb.populations).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("modulation 'none' is bit-identical to no modulation")
{
    Scenario a;
    a.array = EmitterArray::chain(2, 0.125);
    a.pulse = PulseSpec::coherent(1.0, 1.0);
    Scenario b = a;
    b.array.modulation.assign(2, ModulationSpec::none());
    const auto ra = run_scatter(a), rb = run_scatter(b);
    CHECK(ra.populations == rb.populations);
    CHECK(ra.r == rb.r);
    CHECK(ra.l == rb.l);
}

TEST_CASE("weak coherent drive approaches single-photon dynamics")
{
    Scenario fock;
    fock.array = EmitterArray::chain(2, 0.125);
    fock.pulse = PulseSpec::fock(1, 1.0);
    fock.adaptive_final = false;
    fock.integrator.t_final = 20.0;
    const auto rf = run_scatter(fock);
    double prev = 1.0;
    for (double nbar : {1e-1, 1e-2, 1e-3}) {
        Scenario coh = fock;
        coh.pulse = PulseSpec::coherent(nbar, 1.0);
        const auto rc = run_scatter(coh);
        const double d = (rc.populations / nbar - rf.populations).cwiseAbs().maxCoeff();
        CHECK(d < prev); // shrinks with nbar
        CHECK(d < 2 * nbar);
        prev = d;
    }
}

TEST_CASE("invariants hold along a Fock-2 trajectory")
{
    Scenario s;
    s.array = EmitterArray::chain(2, 0.125);
    s.pulse = PulseSpec::fock(2, 1.0);
    // run_scatter raises IntegrityError on any violation
    CHECK_NOTHROW(run_scatter(s));
}
