#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "hopmem/energy.hpp"
#include "hopmem/numerics.hpp"
#include "hopmem/patterns.hpp"
#include "hopmem/rng.hpp"

using namespace hopmem;

namespace {

PatternSet fig_2d() {
    std::istringstream in("-2,-0.5\n0.2,-0.3\n1.5,1.5\n");
    return load_patterns(in, PatternFormat::Csv);
}

PatternSet fig_1d() {
    std::istringstream in("-2\n0\n1\n");
    return load_patterns(in, PatternFormat::Csv);
}

PatternSet random_set(Rng& rng, std::size_t max_dim, std::size_t max_count, double range) {
    const std::size_t n = 1 + rng.next_below(max_dim);
    const std::size_t d = 1 + rng.next_below(max_count);
    std::vector<double> data(n * d);
    for (double& v : data) {
        v = rng.next_uniform(-range, range);
    }
    return PatternSet::from_matrix(Matrix(n, std::move(data)));
}

std::vector<double> random_point(Rng& rng, std::size_t n, double range) {
    std::vector<double> x(n);
    for (double& v : x) {
        v = rng.next_uniform(-range, range);
    }
    return x;
}

// Local minima of a tabulated grid (strictly below every neighbor).
std::vector<std::size_t> grid_local_minima(const LandscapeTable& t) {
    std::vector<std::size_t> mins;
    const std::size_t r = t.resolution;
    if (t.dim == 1) {
        for (std::size_t i = 1; i + 1 < r; ++i) {
            if (t.energy[i] < t.energy[i - 1] && t.energy[i] < t.energy[i + 1]) {
                mins.push_back(i);
            }
        }
        return mins;
    }
    for (std::size_t i = 1; i + 1 < r; ++i) {
        for (std::size_t j = 1; j + 1 < r; ++j) {
            const double v = t.energy[i * r + j];
            bool lowest = true;
            for (int di = -1; di <= 1 && lowest; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) {
                        continue;
                    }
                    if (v >= t.energy[(i + di) * r + (j + dj)]) {
                        lowest = false;
                        break;
                    }
                }
            }
            if (lowest) {
                mins.push_back(i * r + j);
            }
        }
    }
    return mins;
}

} // namespace

TEST_CASE("nearest-neighbor objective zeroes exactly on stored patterns") {
    const PatternSet p1 = fig_1d();
    CHECK(g_energy(p1.row(1), p1) == 0.0);
    CHECK(g_energy(std::vector<double>{0.4}, p1) == doctest::Approx(0.16));

    const PatternSet p2 = fig_2d();
    CHECK(g_energy(std::vector<double>{0.0, 0.0}, p2) == doctest::Approx(0.13));
    CHECK_THROWS_AS(g_energy(std::vector<double>{0.0}, p2), std::invalid_argument);
}

TEST_CASE("distance energy equals the smooth minimum of squared distances") {
    const PatternSet p1 = fig_1d();
    CHECK(layer_energy(std::vector<double>{0.0}, p1, 1.0) ==
          doctest::Approx(-0.32656264126747046).epsilon(1e-12));

    // A single stored pattern collapses the energy to the squared distance.
    std::istringstream in("1.5,2.5,-3\n");
    const PatternSet one = load_patterns(in, PatternFormat::Csv);
    Rng rng(3);
    for (int t = 0; t < 50; ++t) {
        const auto x = random_point(rng, 3, 20.0);
        CHECK(layer_energy(x, one, 1.0) == doctest::Approx(squared_euclidean(x, one.row(0))));
    }
}

TEST_CASE("distance energy is bracketed by the nn objective") {
    Rng rng(17);
    for (int t = 0; t < 300; ++t) {
        const PatternSet set = random_set(rng, 16, 64, 10.0);
        const auto x = random_point(rng, set.dim(), 10.0);
        const double g = g_energy(x, set);
        const double e = layer_energy(x, set, 1.0);
        const double logd = std::log(static_cast<double>(set.count()));
        CHECK(e >= g - logd - 1e-9);
        CHECK(e <= g + 1e-9);
    }
}

TEST_CASE("distance energy is translation equivariant, hopfield energy is not") {
    Rng rng(29);
    const PatternSet set = random_set(rng, 6, 12, 5.0);
    const auto x = random_point(rng, set.dim(), 5.0);
    std::vector<double> shift = random_point(rng, set.dim(), 3.0);

    std::vector<double> moved_data(set.mat().data());
    for (std::size_t i = 0; i < set.count(); ++i) {
        for (std::size_t k = 0; k < set.dim(); ++k) {
            moved_data[i * set.dim() + k] += shift[k];
        }
    }
    const PatternSet moved = PatternSet::from_matrix(Matrix(set.dim(), std::move(moved_data)));
    std::vector<double> xs(x);
    for (std::size_t k = 0; k < xs.size(); ++k) {
        xs[k] += shift[k];
    }
    CHECK(layer_energy(xs, moved, 1.0) == doctest::Approx(layer_energy(x, set, 1.0)).epsilon(1e-9));

    // Witness instance for the quadratic term breaking translation symmetry.
    const double before = mchn_energy(x, set, 1.0);
    const double after = mchn_energy(xs, moved, 1.0);
    CHECK(std::fabs(after - before) > 1e-6);
}

TEST_CASE("hopfield energy with one pattern is half the squared distance") {
    std::istringstream in("2,-1,0.5\n");
    const PatternSet one = load_patterns(in, PatternFormat::Csv);
    Rng rng(31);
    for (double beta : {0.5, 1.0, 2.0}) {
        const auto x = random_point(rng, 3, 8.0);
        CHECK(mchn_energy(x, one, beta) ==
              doctest::Approx(0.5 * squared_euclidean(x, one.row(0))).epsilon(1e-10));
    }
}

TEST_CASE("hopfield energy decomposes into lse plus regularizer") {
    const PatternSet p2 = fig_2d();
    Rng rng(37);
    for (int t = 0; t < 20; ++t) {
        const auto x = random_point(rng, 2, 4.0);
        CHECK(mchn_energy(x, p2, 2.0) ==
              doctest::Approx(mchn_lse_term(x, p2, 2.0) + mchn_regularizer(x, p2, 2.0)));
    }
}

TEST_CASE("classical energy of a stored pattern under the hebbian rule") {
    // Single stored pattern, zero bias: s^T W s expands to (n^2 - n) / n.
    Rng rng(41);
    for (std::size_t n : {4, 9, 20}) {
        std::vector<double> row(n);
        for (double& v : row) {
            v = rng.next_sign() ? 1.0 : -1.0;
        }
        const PatternSet set = PatternSet::from_matrix(Matrix(n, row));
        const HebbianWeights w = HebbianWeights::from_patterns(set);
        const BinaryState s(row);

        // Independent direct expansion of s^T W s.
        double quad = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j) {
                    quad += row[i] * row[i] * row[j] * row[j] / static_cast<double>(n);
                }
            }
        }
        CHECK(quad == doctest::Approx(static_cast<double>(n) - 1.0));
        CHECK(classical_energy(s, w) ==
              doctest::Approx(-0.5 * (static_cast<double>(n) - 1.0)).epsilon(1e-12));
    }
}

TEST_CASE("dense energy of the stored pattern is minus n to the order") {
    Rng rng(43);
    const std::size_t n = 12;
    std::vector<double> row(n);
    for (double& v : row) {
        v = rng.next_sign() ? 1.0 : -1.0;
    }
    const PatternSet set = PatternSet::from_matrix(Matrix(n, row));
    CHECK(dense_energy(BinaryState(row), set, 2) == doctest::Approx(-144.0));
    CHECK(dense_energy(BinaryState(row), set, 3) == doctest::Approx(-1728.0));
    CHECK_THROWS_AS(dense_energy(BinaryState(row), set, 1), std::invalid_argument);
}

TEST_CASE("exponential energy is lowest at stored patterns over the full cube") {
    const std::size_t n = 10;
    const std::size_t d = 4;
    Rng rng(47);
    std::vector<double> data;
    while (true) {
        data.assign(n * d, 0.0);
        for (double& v : data) {
            v = rng.next_sign() ? 1.0 : -1.0;
        }
        try {
            (void)PatternSet::from_matrix(Matrix(n, data));
            break;
        } catch (const std::exception&) {
            continue;
        }
    }
    const PatternSet set = PatternSet::from_matrix(Matrix(n, data));

    double stored_max = -1e300;
    for (std::size_t i = 0; i < d; ++i) {
        const auto row = set.row(i);
        stored_max = std::max(
            stored_max, exponential_energy(BinaryState({row.begin(), row.end()}), set));
    }
    // Exhaustive scan over all 2^10 states.
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<double> s(n);
        for (std::size_t k = 0; k < n; ++k) {
            s[k] = (mask >> k) & 1 ? 1.0 : -1.0;
        }
        bool is_stored = false;
        for (std::size_t i = 0; i < d && !is_stored; ++i) {
            is_stored = std::equal(s.begin(), s.end(), set.row(i).begin());
        }
        if (!is_stored) {
            CHECK(exponential_energy(BinaryState(s), set) > stored_max);
        }
    }
}

TEST_CASE("binary domain violations raise domain errors") {
    CHECK_THROWS_AS(BinaryState(std::vector<double>{1.0, 0.5}), std::domain_error);
    std::istringstream in("0.5,1\n");
    const PatternSet bad = load_patterns(in, PatternFormat::Csv);
    CHECK_THROWS_AS(HebbianWeights::from_patterns(bad), std::domain_error);
}

TEST_CASE("global energy reduces to the layer energy for one layer") {
    const PatternSet p1 = fig_1d();
    const LayerAssignment one =
        partition_layers(p1, 1, LayerStrategy::RoundRobin, std::vector<double>{1.0});
    const std::vector<double> x{0.3};
    const GlobalEnergyResult res = global_energy(x, p1, one, 1.0);
    CHECK(res.value == doctest::Approx(layer_energy(x, p1, 1.0)));
    CHECK(res.gap_c == doctest::Approx(0.0));
    CHECK(res.active_layer == 0);
}

TEST_CASE("identical layer contents saturate the global lower bound") {
    // Two layers with mirrored contents at the same distances from x.
    std::istringstream in("-1\n1\n");
    const PatternSet set = load_patterns(in, PatternFormat::Csv);
    LayerAssignment layers;
    layers.members = {{0}, {1}};
    layers.trust_radii = {1.0, 1.0};
    const std::vector<double> x{0.0}; // equidistant
    const GlobalEnergyResult res = global_energy(x, set, layers, 1.0);
    CHECK(res.layer_energies[0] == doctest::Approx(res.layer_energies[1]));
    CHECK(res.value == doctest::Approx(res.layer_energies[0] - std::log(2.0)));
    CHECK(res.gap_c == doctest::Approx(0.0));
}

TEST_CASE("global energy stays inside its bracket on random instances") {
    Rng rng(53);
    for (int t = 0; t < 200; ++t) {
        PatternSet set = random_set(rng, 8, 24, 10.0);
        const std::size_t l = 1 + rng.next_below(std::min<std::size_t>(4, set.count()));
        const LayerAssignment layers =
            partition_layers(set, l, LayerStrategy::RoundRobin, std::vector<double>(l, 1.0));
        const auto x = random_point(rng, set.dim(), 10.0);
        const GlobalEnergyResult res = global_energy(x, set, layers, 1.0);
        const double lo = *std::min_element(res.layer_energies.begin(), res.layer_energies.end());
        CHECK(res.value >= lo - std::log(static_cast<double>(l)) - 1e-9);
        CHECK(res.value <= lo + 1e-12);
        CHECK(res.gap_c >= -1e-12);
        // Strict in exact arithmetic; underflowed cross-layer terms can
        // collapse the gap onto the log l boundary in floats.
        CHECK(res.gap_c <= std::log(static_cast<double>(std::max<std::size_t>(l, 2))) + 1e-12);
    }
}

TEST_CASE("proposition report slacks on the fixture and random sweeps") {
    const PatternSet p2 = fig_2d();
    const PropositionReport rep = proposition_report(std::vector<double>{0.0, 0.0}, p2);
    CHECK(rep.p1_lower_slack >= -1e-9);
    CHECK(rep.p1_upper_slack >= -1e-9);
    CHECK(rep.p2_bound - rep.p2_gap >= -1e-9);
    CHECK(rep.p3_lower_slack >= -1e-9);
    CHECK(rep.p3_upper_slack >= -1e-9);

    Rng rng(59);
    for (int t = 0; t < 500; ++t) {
        const PatternSet set = random_set(rng, 16, 64, 10.0);
        const auto x = random_point(rng, set.dim(), 10.0);
        const PropositionReport r = proposition_report(x, set);
        CHECK(r.p1_lower_slack >= -1e-9);
        CHECK(r.p1_upper_slack >= -1e-9);
        CHECK(r.p2_bound - r.p2_gap >= -1e-9);
        CHECK(r.p3_lower_slack >= -1e-9);
        CHECK(r.p3_upper_slack >= -1e-9);
    }
}

TEST_CASE("equal-norm pattern sets make the hopfield gap collapse") {
    Rng rng(61);
    const std::size_t n = 4;
    const std::size_t d = 6;
    std::vector<double> data(n * d);
    for (std::size_t i = 0; i < d; ++i) {
        double nsq = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            data[i * n + k] = rng.next_gaussian();
            nsq += data[i * n + k] * data[i * n + k];
        }
        for (std::size_t k = 0; k < n; ++k) {
            data[i * n + k] *= 3.0 / std::sqrt(nsq);
        }
    }
    const PatternSet set = PatternSet::from_matrix(Matrix(n, std::move(data)));
    for (int t = 0; t < 30; ++t) {
        const auto x = random_point(rng, n, 6.0);
        const double e = layer_energy(x, set, 1.0);
        const double m = mchn_energy(x, set, 2.0);
        CHECK(e == doctest::Approx(2.0 * m - std::log(static_cast<double>(d))).epsilon(1e-9));
    }
}

TEST_CASE("landscape grids have the documented shape and corner evaluations") {
    const PatternSet p2 = fig_2d();
    const std::vector<double> lo{0.0, 0.0};
    const std::vector<double> hi{1.0, 1.0};
    const LandscapeTable t =
        landscape_grid(p2, LandscapeVariant::Distance, 1.0, lo, hi, 2);
    REQUIRE(t.points() == 4);
    CHECK(t.coords[0] == 0.0);
    CHECK(t.coords[1] == 0.0);
    CHECK(t.coords[6] == 1.0);
    CHECK(t.coords[7] == 1.0);
    for (std::size_t p = 0; p < 4; ++p) {
        const std::vector<double> x{t.coords[2 * p], t.coords[2 * p + 1]};
        CHECK(t.energy[p] == doctest::Approx(layer_energy(x, p2, 1.0)));
    }

    const PatternSet p1 = fig_1d();
    const LandscapeTable t1 = landscape_grid(p1, LandscapeVariant::Distance, 1.0,
                                             std::vector<double>{0.0}, std::vector<double>{1.0}, 2);
    CHECK(t1.points() == 2);

    std::istringstream in3("1,2,3\n4,5,6\n");
    const PatternSet p3 = load_patterns(in3, PatternFormat::Csv);
    CHECK_THROWS_AS(landscape_grid(p3, LandscapeVariant::Distance, 1.0,
                                   std::vector<double>(3, 0.0), std::vector<double>(3, 1.0), 4),
                    std::invalid_argument);
}

TEST_CASE("landscape minima sit on stored patterns") {
    const PatternSet p2 = fig_2d();
    const std::vector<double> lo{-4.0, -4.0};
    const std::vector<double> hi{3.0, 3.0};
    const std::size_t res = 200;
    const double cell = 7.0 / static_cast<double>(res - 1);

    for (auto variant : {LandscapeVariant::Mchn, LandscapeVariant::Distance}) {
        const LandscapeTable t = landscape_grid(p2, variant, 1.0, lo, hi, res);
        const auto minima = grid_local_minima(t);
        CHECK(!minima.empty());
        // Every local minimum lies within one cell of a stored pattern.
        for (std::size_t p : minima) {
            double best = 1e300;
            for (std::size_t i = 0; i < p2.count(); ++i) {
                const double dx = t.coords[2 * p] - p2.row(i)[0];
                const double dy = t.coords[2 * p + 1] - p2.row(i)[1];
                best = std::min(best, std::max(std::fabs(dx), std::fabs(dy)));
            }
            CHECK(best <= cell * 1.5);
        }
        // The grid argmin is a stored pattern's cell.
        const std::size_t arg = static_cast<std::size_t>(
            std::min_element(t.energy.begin(), t.energy.end()) - t.energy.begin());
        double best = 1e300;
        for (std::size_t i = 0; i < p2.count(); ++i) {
            const double dx = t.coords[2 * arg] - p2.row(i)[0];
            const double dy = t.coords[2 * arg + 1] - p2.row(i)[1];
            best = std::min(best, std::max(std::fabs(dx), std::fabs(dy)));
        }
        CHECK(best <= cell * 1.5);
    }

    // The distance variant keeps a separate basin per pattern.
    const LandscapeTable dist = landscape_grid(p2, LandscapeVariant::Distance, 1.0, lo, hi, res);
    const auto minima = grid_local_minima(dist);
    for (std::size_t i = 0; i < p2.count(); ++i) {
        bool owned = false;
        for (std::size_t p : minima) {
            const double dx = dist.coords[2 * p] - p2.row(i)[0];
            const double dy = dist.coords[2 * p + 1] - p2.row(i)[1];
            owned = owned || std::max(std::fabs(dx), std::fabs(dy)) <= cell * 1.5;
        }
        CHECK(owned);
    }
}

TEST_CASE("one-dimensional curves expose the basin structure") {
    const PatternSet p1 = fig_1d();
    const std::vector<double> lo{-4.0};
    const std::vector<double> hi{3.0};

    // Sharp distance energy separates all three basins.
    const LandscapeTable sharp = landscape_grid(p1, LandscapeVariant::Distance, 4.0, lo, hi, 400);
    const auto minima = grid_local_minima(sharp);
    REQUIRE(minima.size() == 3);
    const double targets[3] = {-2.0, 0.0, 1.0};
    for (int i = 0; i < 3; ++i) {
        CHECK(std::fabs(sharp.coords[minima[i]] - targets[i]) < 0.2);
    }

    // Hopfield curves at beta 1 and 2: finite everywhere, global minimum
    // near a stored pattern.
    for (double beta : {1.0, 2.0}) {
        const LandscapeTable t = landscape_grid(p1, LandscapeVariant::Mchn, beta, lo, hi, 400);
        const std::size_t arg = static_cast<std::size_t>(
            std::min_element(t.energy.begin(), t.energy.end()) - t.energy.begin());
        double best = 1e300;
        for (std::size_t i = 0; i < p1.count(); ++i) {
            best = std::min(best, std::fabs(t.coords[arg] - p1.row(i)[0]));
        }
        CHECK(best < 0.25);
    }
}

TEST_CASE("landscape csv uses the fixed 17-digit format") {
    const PatternSet p1 = fig_1d();
    const LandscapeTable t = landscape_grid(p1, LandscapeVariant::Distance, 1.0,
                                            std::vector<double>{0.0}, std::vector<double>{1.0}, 3);
    std::ostringstream out;
    write_landscape_csv(out, t);
    const std::string text = out.str();
    CHECK(text.rfind("x,energy\n", 0) == 0);
    CHECK(text.find("0.5,") != std::string::npos);
    std::ostringstream again;
    write_landscape_csv(again, t);
    CHECK(again.str() == text);
}
