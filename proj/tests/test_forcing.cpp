// Symbols and their classifiers: translation-bound norms, the normal-function
// sweep, equicontinuity moduli and pointwise-limit probes, against closed
// forms and the paper-derived ground truths.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "attrlab/errors.hpp"
#include "attrlab/expr.hpp"
#include "attrlab/forcing.hpp"
#include "attrlab/nonlinearity.hpp"

using namespace attrlab;

namespace {

constexpr double kPi = 3.14159265358979323846;

// ell = pi so the first sine eigenvalue is 1 and ||phi_1||_{V'}^2 = 1
BasisId rds_basis() { return BasisId{BasisKind::rds_sine, 8, kPi}; }

std::vector<double> mode1_shape(double amp = 1.0) {
    std::vector<double> shape(basis_num_doubles(rds_basis()), 0.0);
    shape[0] = amp;
    return shape;
}

Symbol force_with_profile(TimeProfile profile) {
    Symbol s;
    s.id = "test";
    s.force = std::make_shared<const ForceField>(
        ForceField::make(rds_basis(), mode1_shape(), std::move(profile)));
    return s;
}

}  // namespace

TEST_CASE("expression grammar: operators, functions, T symbol") {
    CHECK(Expr::parse("1 + 2*3").eval(0, 0) == 7.0);
    CHECK(Expr::parse("2^3^2").eval(0, 0) == 512.0);  // right-assoc
    CHECK(Expr::parse("-v^2").eval(3, 0) == -9.0);
    CHECK(Expr::parse("abs(v) + min(v, t)").eval(-2, 5) == 0.0);
    CHECK(Expr::parse("max(0, t)").eval(0, -3) == 0.0);
    CHECK(Expr::parse("T").eval(0, -3) == 0.0);
    CHECK(Expr::parse("T").eval(0, 2.5) == 2.5);
    CHECK(Expr::parse("sin(v)/exp(t)").eval(kPi / 2, 0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(Expr::parse("2 +"), ValidationError);
    CHECK_THROWS_AS(Expr::parse("foo(2)"), ValidationError);
    CHECK_THROWS_AS(Expr::parse("(1"), ValidationError);
}

TEST_CASE("builtin nonlinearities: spec'd branch values") {
    for (double p : {2.0, 3.0, 4.0}) {
        const Nonlinearity f1 = builtin_nonlinearity("example1", p);
        CHECK(f1(-1.0, 0.0) == doctest::Approx(-1.0));
        CHECK(f1(-1.0, 57.3) == doctest::Approx(-1.0));
        for (double t : {0.0, 1.0, 10.0, 300.0}) {
            const double T = std::max(0.0, t);
            CHECK(f1(1.0 / (2.0 * (1.0 + T)), t) == doctest::Approx(-0.5));
            // continuity at the second junction v = 1/(1+T)
            const double s = 1.0 / (1.0 + T);
            CHECK(f1(s, t) == doctest::Approx(-1.0));
            CHECK(f1(s + 1e-9, t) == doctest::Approx(-1.0).epsilon(1e-6));
        }
        const Nonlinearity f2 = builtin_nonlinearity("example2", p);
        // junctions at +-2pi are continuity points with value 0
        for (double t : {0.0, 3.0, 47.0}) {
            CHECK(f2(2.0 * kPi, t) == doctest::Approx(0.0).epsilon(1e-12));
            CHECK(f2(-2.0 * kPi, t) == doctest::Approx(0.0).epsilon(1e-12));
            CHECK(std::abs(f2(2.0 * kPi - 1e-7, t)) < 1e-5);
            CHECK(std::abs(f2(-2.0 * kPi + 1e-7, t)) < 1e-5);
        }
        const Nonlinearity f3 = builtin_nonlinearity("example3", p);
        for (double t : {0.0, 5.0}) {
            CHECK(f3(2.0, t) == doctest::Approx(0.0).epsilon(1e-12));
            CHECK(f3(-2.0, t) == doctest::Approx(0.0).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(builtin_nonlinearity("nope", 2.0), ValidationError);
    CHECK_THROWS_AS(builtin_nonlinearity("example1", 1.5), ValidationError);
}

TEST_CASE("validator: equality cases and the examples' declared constants") {
    const auto vg = linspace(-10.0, 10.0, 2001);
    const auto tg = linspace(0.0, 100.0, 101);

    const Nonlinearity cubic = builtin_nonlinearity("cubic", 4.0);
    const NonlinearityReport rc = validate_nonlinearity(cubic, vg, tg);
    CHECK(rc.pass);
    CHECK(std::abs(rc.worst_diss_margin) < 1e-9);

    const Nonlinearity lin = builtin_nonlinearity("linear", 2.0);
    const NonlinearityReport rl = validate_nonlinearity(lin, vg, tg);
    CHECK(rl.pass);
    CHECK(std::abs(rl.worst_diss_margin) < 1e-12);

    for (const char* name : {"example1", "example2", "example3"}) {
        for (double p : {2.0, 4.0}) {
            const Nonlinearity f = builtin_nonlinearity(name, p);
            const NonlinearityReport r = validate_nonlinearity(f, vg, tg);
            INFO(name, " p=", p, " diss=", r.worst_diss_margin,
                 " grow=", r.worst_grow_margin);
            CHECK(r.pass);
        }
    }

    const Nonlinearity chafee = builtin_nonlinearity("cubic", 4.0, 2.0);
    CHECK(validate_nonlinearity(chafee, vg, tg).pass);
}

TEST_CASE("translation_bound_norm: constant and closed-form sine window") {
    const ProbeGrid grid{0.0, 13.0, 1e-3};
    const Symbol c = force_with_profile(profile_constant(0.7));
    // ||phi_1||_{V'}^2 = 1 here, so the norm is exactly 0.49
    CHECK(translation_bound_norm(c, grid) == doctest::Approx(0.49).epsilon(1e-12));

    const Symbol s = force_with_profile(profile_sines({1.3}, {1.0}));
    const double expected = 1.3 * 1.3 * (0.5 + 0.5 * std::sin(1.0));
    CHECK(translation_bound_norm(s, grid) ==
          doctest::Approx(expected).epsilon(1e-5));
}

TEST_CASE("normal_defect: constant is normal, the spike train is not") {
    const ProbeGrid grid{0.0, 24.0, 1e-3};
    const Symbol c = force_with_profile(profile_constant(1.0));
    for (double delta : {1.0, 0.5, 0.25, 0.125})
        CHECK(normal_defect(c, delta, grid) == doctest::Approx(delta).epsilon(1e-12));
    const NormalSweep cs = is_normal(c, 1e-2, grid, 1.0, 1e-3);
    CHECK(cs.normal);

    const Symbol spike = force_with_profile(profile_spikes());
    double prev = 1e300;
    for (double delta : {1.0, 0.5, 0.25, 0.0625, 1.0 / 64}) {
        const double d = normal_defect(spike, delta, grid);
        CHECK(d >= 1.0 - 1e-12);  // every probed window length traps a full spike
        CHECK(d <= prev + 1e-12);  // monotone nondecreasing in delta
        prev = d;
    }
    const NormalSweep ss = is_normal(spike, 0.9, grid, 1.0, 1e-3);
    CHECK_FALSE(ss.normal);
    // translation bounded nevertheless: the unit-window mass peaks at 7/4
    const double tb = translation_bound_norm(spike, grid);
    CHECK(tb >= 1.0);
    CHECK(tb <= 1.75 + 1e-9);
    CHECK(tb >= 1.74 - 1e-2);
}

TEST_CASE("translate_symbol: identity, composition, shifted spikes") {
    const Symbol spike = force_with_profile(profile_spikes());
    const Symbol s0 = translate_symbol(spike, 0.0);
    CHECK(s0.force_value(3.0001) == spike.force_value(3.0001));
    const Symbol s_ab = translate_symbol(translate_symbol(spike, 1.25), 0.75);
    const Symbol s_sum = translate_symbol(spike, 2.0);
    for (double t : {0.5, 1.0001, 2.0002, 5.00001})
        CHECK(s_ab.force_value(t) == s_sum.force_value(t));
    // spikes of T(h)sigma sit at n - h
    const Symbol sh = translate_symbol(spike, 0.5);
    CHECK(sh.force_value(2.5 + 1e-9) > 0.0);   // spike n=3 now at 2.5
    CHECK(sh.force_value(3.2) == 0.0);
    // translation-bound norm is invariant on shifted probe grids
    const ProbeGrid grid{0.0, 24.0, 1e-3};
    const ProbeGrid shifted{-0.5, 23.5, 1e-3};
    CHECK(translation_bound_norm(sh, shifted) ==
          doctest::Approx(translation_bound_norm(spike, grid)).epsilon(1e-12));
}

TEST_CASE("equicontinuity modulus: sin passes, examples I and II fail") {
    std::vector<double> gaps;
    for (int j = 0; j <= 12; ++j) gaps.push_back(std::pow(2.0, -j));
    std::vector<double> t_samples{0.0};
    for (double t = 1.0; t <= 20000.0; t *= 2.0) t_samples.push_back(t);

    Nonlinearity sinf;
    sinf.eval = [](double v, double) { return std::sin(v); };
    sinf.tag = "sin";
    const ModulusTable ms = equicontinuity_modulus(sinf, 1.0, t_samples, 1e-4, gaps);
    CHECK(ms.passes);
    for (std::size_t i = 0; i < gaps.size(); ++i)
        CHECK(ms.theta[i] <= gaps[i] + 1e-9);  // 1-Lipschitz

    const Nonlinearity f1 = builtin_nonlinearity("example1", 2.0);
    const ModulusTable m1 = equicontinuity_modulus(f1, 1.0, t_samples, 1e-4, gaps);
    CHECK_FALSE(m1.passes);
    CHECK(m1.theta.back() >= 0.45);  // modulus does not shrink with the gap

    // direct check at the shrinking scale 1/(1+T)
    for (double T : {3.0, 30.0, 300.0}) {
        const ModulusTable mT = equicontinuity_modulus(
            f1, 1.0, {T}, std::min(1e-4, 0.05 / (1.0 + T)), {1.0 / (1.0 + T)});
        CHECK(mT.theta[0] >= 0.5 - 0.05);
    }

    std::vector<double> gaps2;
    for (int j = 0; j <= 10; ++j) gaps2.push_back(kPi * std::pow(2.0, -j));
    const Nonlinearity f2 = builtin_nonlinearity("example2", 2.0);
    const ModulusTable m2 =
        equicontinuity_modulus(f2, 2.0 * kPi, t_samples, 1e-4, gaps2);
    CHECK_FALSE(m2.passes);
    CHECK(m2.theta.back() >= 1.5);  // sin(1+T)v sweeps its range inside the bump
}

TEST_CASE("built-in examples are continuous across branch junctions") {
    // no jump beyond the local modulus on a fine (v,t) sampling
    for (const char* name : {"example1", "example2", "example3"}) {
        const Nonlinearity f = builtin_nonlinearity(name, 2.0);
        for (double t : {0.0, 1.0, 7.0, 100.0}) {
            const double span = name[7] == '2' ? 2.5 * kPi : 2.5;
            double prev = f(-span, t);
            double worst = 0.0;
            const int n = 20000;
            for (int i = 1; i <= n; ++i) {
                const double v = -span + 2.0 * span * i / n;
                const double cur = f(v, t);
                worst = std::max(worst, std::abs(cur - prev));
                prev = cur;
            }
            // modulus bound: slopes scale like (1+T) (oscillation frequency
            // in examples I/II, bump transition width in example III)
            const double step = 2.0 * span / n;
            CHECK(worst <= 8.0 * (1.0 + std::max(0.0, t)) * step + 1e-9);
        }
    }
}

TEST_CASE("pointwise limit probe: example1 jumps, example2 diverges") {
    std::vector<double> ts;
    for (int n = 1; n <= 200; ++n) ts.push_back(5.0 * std::sqrt(2.0) * n);

    const Nonlinearity f1 = builtin_nonlinearity("example1", 2.0);
    const LimitProbe p1 = pointwise_limit_probe(f1, linspace(-2.0, 2.0, 401), ts);
    CHECK(p1.diverging == 0);
    CHECK(p1.max_jump == doctest::Approx(1.0).epsilon(0.05));

    const Nonlinearity f2 = builtin_nonlinearity("example2", 2.0);
    const LimitProbe p2 = pointwise_limit_probe(f2, {kPi / 2.0}, ts);
    CHECK(p2.diverging == 1);

    const Nonlinearity cubic = builtin_nonlinearity("cubic", 4.0);
    const auto vg = linspace(-1.0, 1.0, 101);
    const LimitProbe pc = pointwise_limit_probe(cubic, vg, ts);
    CHECK(pc.diverging == 0);
    for (std::size_t i = 0; i < vg.size(); ++i) {
        CHECK(pc.converged[i]);
        CHECK(pc.limit[i] == doctest::Approx(cubic(vg[i], 0.0)));
        CHECK(pc.residual[i] == 0.0);
    }
}

TEST_CASE("catalog ground truths respect the class inclusions") {
    const ProbeGrid grid{0.0, 24.0, 1e-3};
    for (const char* name :
         {"constant", "quasiperiodic", "decaying", "spike_train"}) {
        ForceParams params;
        params.amplitude = 0.5;
        const Symbol s = builtin_force(name, rds_basis(), mode1_shape(), params);
        const ForceTruth truth = builtin_force_truth(name);
        const double tb = translation_bound_norm(s, grid);
        const NormalSweep sweep = is_normal(s, 1e-2, grid, 1.0, 1e-4);
        INFO(name, " tb=", tb, " normal=", sweep.normal);
        CHECK(std::isfinite(tb));  // translation bounded on the probe
        if (truth.translation_compact) CHECK(sweep.normal);
        if (truth.normal) CHECK(sweep.normal);
        if (!truth.normal) CHECK_FALSE(sweep.normal);
    }
    // quasiperiodic window-integral bound: defect <= delta * max|profile|^2 * vp
    ForceParams qp;
    qp.amplitude = 0.5;
    const Symbol q = builtin_force("quasiperiodic", rds_basis(), mode1_shape(), qp);
    const double bound_amp = 0.5 * (1.0 + qp.ratio2);
    for (double delta : {0.5, 0.25, 0.125, 1.0 / 64})
        CHECK(normal_defect(q, delta, grid) <= delta * bound_amp * bound_amp + 1e-9);
    CHECK_THROWS_AS(builtin_force("nope", rds_basis(), mode1_shape()),
                    ValidationError);
}
