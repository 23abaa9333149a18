#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "hopmem/dynamics.hpp"
#include "hopmem/error.hpp"
#include "hopmem/numerics.hpp"
#include "hopmem/patterns.hpp"
#include "hopmem/rng.hpp"

using namespace hopmem;

namespace {

PatternSet csv(const char* text) {
    std::istringstream in(text);
    return load_patterns(in, PatternFormat::Csv);
}

} // namespace

TEST_CASE("soft retrieval step is a convex combination of patterns") {
    const PatternSet set = generate_separated_patterns(12, 4, 6.0, 13);
    Rng rng(1);
    for (int t = 0; t < 100; ++t) {
        std::vector<double> x(4);
        for (double& v : x) {
            v = rng.next_uniform(-10.0, 30.0);
        }
        std::vector<double> w;
        const std::vector<double> next = soft_retrieval_step(x, set, 1.0, &w);
        double sum = 0.0;
        for (double wi : w) {
            CHECK(wi >= 0.0);
            sum += wi;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        // Reconstruct the convex combination independently.
        for (std::size_t k = 0; k < 4; ++k) {
            double acc = 0.0;
            for (std::size_t i = 0; i < set.count(); ++i) {
                acc += w[i] * set.row(i)[k];
            }
            CHECK(next[k] == doctest::Approx(acc));
        }
    }
}

TEST_CASE("single pattern retrieves in one step, midpoint stays fixed") {
    const PatternSet one = csv("3,4\n");
    const std::vector<double> next =
        soft_retrieval_step(std::vector<double>{-10.0, 22.0}, one, 1.0);
    CHECK(next[0] == doctest::Approx(3.0));
    CHECK(next[1] == doctest::Approx(4.0));

    const PatternSet two = csv("0\n1\n");
    const std::vector<double> mid = soft_retrieval_step(std::vector<double>{0.5}, two, 1.0);
    CHECK(mid[0] == doctest::Approx(0.5));
}

TEST_CASE("a point near its pattern stays near when the rest are far") {
    const PatternSet set = generate_separated_patterns(8, 6, 12.0, 21);
    Rng rng(2);
    for (std::size_t i = 0; i < set.count(); ++i) {
        std::vector<double> x(set.row(i).begin(), set.row(i).end());
        x[0] += 0.3;
        const std::vector<double> next = soft_retrieval_step(x, set, 1.0);
        CHECK(std::sqrt(squared_euclidean(next, set.row(i))) < 1e-6);
    }
}

TEST_CASE("retrieve from a stored pattern converges at the first step") {
    const PatternSet set = generate_separated_patterns(10, 5, 10.0, 23);
    RetrievalParams params;
    const RetrievalResult res = retrieve(set.row(4), set, params);
    CHECK(res.converged);
    CHECK(res.iterations == 1);
    REQUIRE(res.attractor_index.has_value());
    CHECK(*res.attractor_index == 4);
    CHECK(res.final_step_norm <= params.tol);
}

TEST_CASE("vanishing inverse temperature pulls everything to the centroid") {
    const PatternSet set = generate_separated_patterns(6, 3, 4.0, 27);
    std::vector<double> centroid(3, 0.0);
    for (std::size_t i = 0; i < set.count(); ++i) {
        for (std::size_t k = 0; k < 3; ++k) {
            centroid[k] += set.row(i)[k] / static_cast<double>(set.count());
        }
    }
    RetrievalParams params;
    params.beta = 1e-6;
    Rng rng(5);
    std::vector<double> x0(3);
    for (double& v : x0) {
        v = rng.next_uniform(-20.0, 20.0);
    }
    const RetrievalResult res = retrieve(x0, set, params);
    CHECK(std::sqrt(squared_euclidean(res.final_point, centroid)) < 1e-3);
}

TEST_CASE("retrieval basin property on a well-separated set") {
    const PatternSet set = generate_separated_patterns(16, 8, 10.0, 29);
    RetrievalParams params;
    params.epsilon = 1e-3;
    params.max_iter = 100;
    Rng rng(6);
    for (int t = 0; t < 200; ++t) {
        const std::size_t target = rng.next_below(set.count());
        std::vector<double> x0(8);
        double nsq = 0.0;
        for (double& v : x0) {
            v = rng.next_gaussian();
            nsq += v * v;
        }
        const double r = std::pow(rng.next_unit(), 1.0 / 8.0) / std::sqrt(nsq);
        for (std::size_t k = 0; k < 8; ++k) {
            x0[k] = set.row(target)[k] + x0[k] * r;
        }
        const RetrievalResult res = retrieve(x0, set, params);
        CHECK(res.converged);
        REQUIRE(res.attractor_index.has_value());
        CHECK(*res.attractor_index == target);
    }
}

TEST_CASE("fixed points reported converged satisfy the step contract") {
    const PatternSet set = generate_separated_patterns(8, 4, 8.0, 31);
    RetrievalParams params;
    Rng rng(7);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> x0(4);
        for (double& v : x0) {
            v = rng.next_uniform(-5.0, 25.0);
        }
        const RetrievalResult res = retrieve(x0, set, params);
        if (res.converged) {
            const std::vector<double> once = soft_retrieval_step(res.final_point, set, params.beta);
            CHECK(std::sqrt(squared_euclidean(once, res.final_point)) <= params.tol * 10.0);
        }
    }
}

TEST_CASE("layered retrieval reduces to plain retrieval for one unconstrained layer") {
    const PatternSet set = generate_separated_patterns(9, 4, 8.0, 37);
    LayerAssignment layers;
    layers.members = {{0, 1, 2, 3, 4, 5, 6, 7, 8}};
    layers.trust_radii = {std::numeric_limits<double>::infinity()};
    RetrievalParams params;
    Rng rng(8);
    std::vector<double> x0(4);
    for (double& v : x0) {
        v = rng.next_uniform(0.0, 20.0);
    }
    const LayeredTrajectory traj = layered_retrieve(x0, set, layers, params);
    const RetrievalResult direct = retrieve(x0, set, params);
    REQUIRE(traj.points.size() == 2);
    CHECK(traj.trust_radii_respected);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(traj.points[1][k] == doctest::Approx(direct.final_point[k]));
    }
    CHECK(traj.global_energy_trace.size() == 2);
}

TEST_CASE("zero trust radii freeze the trajectory") {
    const PatternSet set = generate_separated_patterns(6, 3, 6.0, 41);
    const LayerAssignment layers =
        partition_layers(set, 2, LayerStrategy::RoundRobin, std::vector<double>{0.0, 0.0});
    const std::vector<double> x0{1.0, 2.0, 3.0};
    const LayeredTrajectory traj = layered_retrieve(x0, set, layers, RetrievalParams{});
    REQUIRE(traj.points.size() == 3);
    for (const auto& p : traj.points) {
        CHECK(p == x0);
    }
    CHECK(traj.trust_radii_respected);
}

TEST_CASE("a pattern in the second layer is reachable with a wide trust region") {
    const PatternSet set = generate_separated_patterns(10, 4, 10.0, 43);
    const LayerAssignment layers = partition_layers(
        set, 2, LayerStrategy::RoundRobin,
        std::vector<double>(2, std::numeric_limits<double>::infinity()));
    // Pattern 3 lives in layer 3 % 2 = 1 (the second layer).
    Rng rng(9);
    std::vector<double> x0(set.row(3).begin(), set.row(3).end());
    for (double& v : x0) {
        v += rng.next_uniform(-0.3, 0.3);
    }
    RetrievalParams params;
    params.epsilon = 1e-3;
    const LayeredTrajectory traj = layered_retrieve(x0, set, layers, params);
    REQUIRE(traj.per_layer.size() == 2);
    const auto& last = traj.points.back();
    CHECK(std::sqrt(squared_euclidean(last, set.row(3))) < 1e-3);
}

TEST_CASE("trust region projection respects the squared-distance budget") {
    const PatternSet set = generate_separated_patterns(8, 3, 9.0, 47);
    Rng rng(10);
    for (int t = 0; t < 40; ++t) {
        const std::size_t l = 1 + rng.next_below(3);
        std::vector<double> deltas(l);
        for (double& d : deltas) {
            d = rng.next_uniform(0.1, 4.0);
        }
        const LayerAssignment layers =
            partition_layers(set, l, LayerStrategy::RoundRobin, deltas);
        std::vector<double> x0(3);
        for (double& v : x0) {
            v = rng.next_uniform(-5.0, 25.0);
        }
        const LayeredTrajectory traj = layered_retrieve(x0, set, layers, RetrievalParams{});
        CHECK(traj.trust_radii_respected);
        for (std::size_t step = 0; step + 1 < traj.points.size(); ++step) {
            CHECK(squared_euclidean(traj.points[step + 1], traj.points[step]) <=
                  deltas[step] + 1e-9);
        }
    }
}

TEST_CASE("layered retrieval validates its trust radius list") {
    const PatternSet set = generate_separated_patterns(4, 2, 5.0, 51);
    LayerAssignment layers;
    layers.members = {{0, 1}, {2, 3}};
    layers.trust_radii = {1.0, -2.0};
    CHECK_THROWS_AS(layered_retrieve(std::vector<double>{0.0, 0.0}, set, layers,
                                     RetrievalParams{}),
                    std::invalid_argument);
}

TEST_CASE("stored binary patterns are fixed points of the classical rule") {
    Rng rng(12);
    const std::size_t n = 20;
    const std::size_t d = 2;
    std::vector<double> data(n * d);
    for (double& v : data) {
        v = rng.next_sign() ? 1.0 : -1.0;
    }
    const PatternSet set = PatternSet::from_matrix(Matrix(n, data));
    const HebbianWeights w = HebbianWeights::from_patterns(set);
    for (std::size_t i = 0; i < d; ++i) {
        const auto row = set.row(i);
        const BinaryState s({row.begin(), row.end()});
        const BinaryState next = binary_update(s, w, BinaryUpdateMode::AsynchronousSweep);
        CHECK(next.spins() == s.spins());
        const BinaryState sync = binary_update(s, w, BinaryUpdateMode::Synchronous);
        CHECK(sync.spins() == s.spins());
    }
}

TEST_CASE("classical recall fixes a five percent corruption") {
    Rng rng(14);
    const std::size_t n = 100;
    const std::size_t d = 5;
    std::size_t recovered = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        std::vector<double> data(n * d);
        for (double& v : data) {
            v = rng.next_sign() ? 1.0 : -1.0;
        }
        const PatternSet set = PatternSet::from_matrix(Matrix(n, data));
        const HebbianWeights w = HebbianWeights::from_patterns(set);
        std::vector<double> s(set.row(0).begin(), set.row(0).end());
        for (int f = 0; f < 5; ++f) {
            const std::size_t j = rng.next_below(n);
            s[j] = -s[j];
        }
        BinaryState state(s);
        for (int sweep = 0; sweep < 30; ++sweep) {
            BinaryState next = binary_update(state, w, BinaryUpdateMode::AsynchronousSweep);
            const bool stable = next.spins() == state.spins();
            state = std::move(next);
            if (stable) {
                break;
            }
        }
        if (std::equal(state.spins().begin(), state.spins().end(), set.row(0).begin())) {
            ++recovered;
        }
    }
    CHECK(recovered >= 190); // 95% of trials
}

TEST_CASE("zero field keeps the spin") {
    // A single stored pattern and its exact inverse state: every field term
    // cancels through the zero diagonal only when weights are zero, so use
    // an explicitly zeroed coupling matrix instead.
    HebbianWeights w;
    w.n = 4;
    w.w.assign(16, 0.0);
    w.bias.assign(4, 0.0);
    const BinaryState s(std::vector<double>{1.0, -1.0, 1.0, -1.0});
    const BinaryState next = binary_update(s, w, BinaryUpdateMode::AsynchronousSweep);
    CHECK(next.spins() == s.spins());
}

TEST_CASE("asynchronous sweeps never increase the table energies") {
    Rng rng(15);
    const std::size_t n = 16;
    const std::size_t d = 6;
    for (int t = 0; t < 30; ++t) {
        std::vector<double> data(n * d);
        for (double& v : data) {
            v = rng.next_sign() ? 1.0 : -1.0;
        }
        PatternSet set = [&] {
            try {
                return PatternSet::from_matrix(Matrix(n, data));
            } catch (const IngestError&) {
                data[0] = -data[0];
                return PatternSet::from_matrix(Matrix(n, data));
            }
        }();
        std::vector<double> s(n);
        for (double& v : s) {
            v = rng.next_sign() ? 1.0 : -1.0;
        }

        for (auto variant :
             {EnergySpec::Variant::DensePolynomial, EnergySpec::Variant::ExponentialBinary}) {
            EnergySpec spec;
            spec.variant = variant;
            spec.poly_order = 3;
            BinaryState state(s);
            double prev = variant == EnergySpec::Variant::DensePolynomial
                              ? dense_energy(state, set, 3)
                              : exponential_energy(state, set);
            for (int sweep = 0; sweep < 5; ++sweep) {
                state = binary_update(state, spec, set, BinaryUpdateMode::AsynchronousSweep);
                const double e = variant == EnergySpec::Variant::DensePolynomial
                                     ? dense_energy(state, set, 3)
                                     : exponential_energy(state, set);
                CHECK(e <= prev + 1e-9);
                prev = e;
            }
        }

        // Classical monotonicity under asynchronous sweeps.
        const HebbianWeights w = HebbianWeights::from_patterns(set);
        BinaryState state(s);
        double prev = classical_energy(state, w);
        for (int sweep = 0; sweep < 5; ++sweep) {
            state = binary_update(state, w, BinaryUpdateMode::AsynchronousSweep);
            const double e = classical_energy(state, w);
            CHECK(e <= prev + 1e-9);
            prev = e;
        }
    }
}

TEST_CASE("binary update rejects continuous specs") {
    const PatternSet set = csv("1,-1\n-1,1\n");
    EnergySpec spec;
    spec.variant = EnergySpec::Variant::Distance;
    CHECK_THROWS_AS(binary_update(BinaryState(std::vector<double>{1.0, -1.0}), spec, set,
                                  BinaryUpdateMode::AsynchronousSweep),
                    std::domain_error);
}

TEST_CASE("storage check passes a well-separated instance and reports displacement") {
    const PatternSet set = generate_separated_patterns(8, 6, 10.0, 55);
    std::vector<double> radii(set.count(), 1.0);
    RetrievalParams params;
    params.epsilon = 1e-3;
    params.max_iter = 100;
    const auto reports = storage_check(set, radii, 50, params, 99);
    REQUIRE(reports.size() == set.count());
    for (const BallReport& rep : reports) {
        CHECK(rep.pass);
        CHECK(rep.converged_to_pattern == rep.samples);
        CHECK(rep.displacement < 1e-3);
        CHECK(rep.max_pairwise_final <= 2.0 * params.epsilon);
    }
}

TEST_CASE("storage check demands disjoint balls") {
    const PatternSet set = generate_separated_patterns(4, 3, 4.0, 57);
    std::vector<double> radii(set.count(), 3.0); // overlapping
    CHECK_THROWS_AS(storage_check(set, radii, 5, RetrievalParams{}, 1), PreconditionError);
}

TEST_CASE("single pattern is trivially stored") {
    const PatternSet one = csv("5,5,5\n");
    RetrievalParams params;
    const auto reports = storage_check(one, std::vector<double>{2.0}, 20, params, 3);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].pass);
    CHECK(reports[0].displacement == doctest::Approx(0.0));
}

TEST_CASE("capacity of a single pattern is perfect for every family") {
    const std::vector<std::size_t> counts{1};
    for (auto variant :
         {EnergySpec::Variant::ClassicalBinary, EnergySpec::Variant::DensePolynomial,
          EnergySpec::Variant::ExponentialBinary, EnergySpec::Variant::Distance}) {
        EnergySpec spec;
        spec.variant = variant;
        spec.poly_order = 2;
        const CapacityCurve curve = capacity_sweep(spec, 24, counts, 10, 0.05, 7);
        CHECK(curve.success_rates[0] == doctest::Approx(1.0));
        CHECK(curve.threshold_dstar == 1);
    }
}

TEST_CASE("capacity curve smooths to a non-increasing profile") {
    EnergySpec spec;
    spec.variant = EnergySpec::Variant::ClassicalBinary;
    const std::vector<std::size_t> counts{1, 2, 3, 4, 6, 8, 10, 12, 16};
    const CapacityCurve curve = capacity_sweep(spec, 40, counts, 40, 0.05, 123);
    // Moving average of width 3.
    std::vector<double> smooth;
    for (std::size_t i = 0; i + 3 <= curve.success_rates.size(); ++i) {
        smooth.push_back((curve.success_rates[i] + curve.success_rates[i + 1] +
                          curve.success_rates[i + 2]) /
                         3.0);
    }
    for (std::size_t i = 0; i + 1 < smooth.size(); ++i) {
        CHECK(smooth[i + 1] <= smooth[i] + 0.15);
    }
    CHECK(curve.threshold_dstar >= 1);
}
