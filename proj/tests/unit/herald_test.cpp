#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qnet/qnet.hpp"

using namespace qnet;

namespace {

const double r2 = 1.0 / std::sqrt(2.0);

double total_probability(const std::vector<ProjectionRow>& rows) {
  double s = 0.0;
  for (const auto& r : rows) s += r.probability;
  return s;
}

const ProjectionRow* find_row(const std::vector<ProjectionRow>& rows, const std::string& label) {
  const auto want = parse_pattern(label);
  for (const auto& r : rows)
    if (r.pattern == want) return &r;
  return nullptr;
}

// Every simulated row must match the permanent oracle and vice versa.
void expect_matches_oracle(const std::vector<ProjectionRow>& rows, const Eigen::MatrixXcd& U, int N,
                           const std::vector<int>& ports, const std::vector<Sign>& signs = {}) {
  std::vector<double> s;
  for (auto x : signs) s.push_back(sign_value(x));
  const auto table = oracle::swap_table(U, N, ports, s);
  ASSERT_EQ(rows.size(), table.size());
  for (const auto& row : rows) {
    const auto it = table.find(pattern_label(row.pattern));
    ASSERT_NE(it, table.end()) << pattern_label(row.pattern);
    EXPECT_NEAR(row.probability, it->second.probability, 1e-12) << it->first;
    const QubitState expected = QubitState(N, it->second.atoms).normalized();
    EXPECT_NEAR(fidelity(expected, row.state), 1.0, 1e-9) << it->first;
  }
}

std::vector<int> iota_ports(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 1);
  return p;
}

}  // namespace

TEST(PatternLabel, RoundTrip) {
  for (const std::string s : {"h1 h2 h3 h4", "h1^2 v3", "v1^2 v2", "d1 d3"}) EXPECT_EQ(pattern_label(parse_pattern(s)), s);
  EXPECT_THROW(parse_pattern("x1"), RangeError);
  EXPECT_THROW(parse_pattern("h0"), RangeError);
}

TEST(SwapInput, Examples) {
  const auto two = prepare_swap_input(2);
  EXPECT_EQ(two.size(), 4u);
  for (const auto& [k, a] : two.terms()) EXPECT_NEAR(std::abs(a), 0.5, 1e-12);
  EXPECT_NEAR(prepare_swap_input(3).norm2(), 1.0, 1e-12);

  // Left side of the four-pair expansion: 16 terms, atom bit n set iff photon n is V.
  const auto four = prepare_swap_input(4);
  EXPECT_EQ(four.size(), 16u);
  for (const auto& [k, a] : four.terms()) {
    EXPECT_NEAR(a.real(), 0.25, 1e-12);
    for (int n = 0; n < 4; ++n) {
      const auto pol = k.atoms[n] == '1' ? Polarization::V : Polarization::H;
      EXPECT_EQ(k.photons.occupations.count({n + 1, pol}), 1);
    }
  }
  EXPECT_THROW(prepare_swap_input(1), RangeError);
  EXPECT_THROW(prepare_swap_input(3, {Sign::Plus}), DimensionError);
}

TEST(Gbsa, QuarterRowsFromTheTable) {
  const auto rows = run_gbsa(prepare_swap_input(4), quarter());
  const auto* a = find_row(rows, "h1 h2 h3 h4");
  ASSERT_NE(a, nullptr);
  EXPECT_NEAR(a->probability, 1.0 / 64.0, 1e-12);
  EXPECT_NEAR(fidelity(a->state, QubitState::basis("0000")), 1.0, 1e-12);

  const auto* b = find_row(rows, "h1 h2 v1 v2");
  ASSERT_NE(b, nullptr);
  EXPECT_NEAR(b->probability, 1.0 / 128.0, 1e-12);
  EXPECT_NEAR(fidelity(b->state, QubitState::from_map(4, {{"0110", r2}, {"1001", r2}})), 1.0, 1e-12);
}

TEST(Gbsa, TritterAllHorizontalRow) {
  const auto rows = run_gbsa(prepare_swap_input(3), tritter());
  const auto* a = find_row(rows, "h1 h2 h3");
  ASSERT_NE(a, nullptr);
  EXPECT_NEAR(a->probability, 1.0 / 24.0, 1e-12);
  EXPECT_NEAR(fidelity(a->state, QubitState::basis("000")), 1.0, 1e-12);
}

TEST(Gbsa, QuarterMatchesPermanentOracle) {
  expect_matches_oracle(run_gbsa(prepare_swap_input(4), quarter()), quarter().entries(), 4, iota_ports(4));
}

TEST(Gbsa, TritterMatchesPermanentOracle) {
  expect_matches_oracle(run_gbsa(prepare_swap_input(3), tritter()), tritter().entries(), 3, iota_ports(3));
}

TEST(Gbsa, RandomUnitariesSignsAndPortsMatchOracle) {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 4; ++trial) {
    const int dim = 3 + trial % 2;
    const int N = trial < 2 ? 2 : 3;
    const MultiportMatrix U(oracle::random_unitary(dim, rng), "random");
    std::vector<int> ports = iota_ports(dim);
    std::shuffle(ports.begin(), ports.end(), rng);
    ports.resize(N);
    std::vector<Sign> signs(N);
    for (auto& s : signs) s = (rng() & 1) ? Sign::Minus : Sign::Plus;
    const auto rows = run_gbsa(prepare_swap_input(N, signs, ports), U);
    expect_matches_oracle(rows, U.entries(), N, ports, signs);
    EXPECT_NEAR(total_probability(rows), 1.0, 1e-12);
  }
}

TEST(Gbsa, OutputPermutationCovariance) {
  // Relabelling outputs (U' = P U) relabels every pattern and nothing else.
  const std::vector<int> sigma{2, 0, 3, 1};
  Eigen::MatrixXcd pu(4, 4);
  for (int j = 0; j < 4; ++j) pu.row(j) = quarter().entries().row(sigma[j]);
  const auto base = run_gbsa(prepare_swap_input(4), quarter());
  const auto moved = run_gbsa(prepare_swap_input(4), MultiportMatrix(pu, "pq"));
  ASSERT_EQ(base.size(), moved.size());
  for (const auto& row : moved) {
    ModeCounts mapped;
    for (const auto& [mode, k] : row.pattern.occupations.entries()) mapped.add({sigma[mode.port - 1] + 1, mode.pol}, k);
    const auto* b = find_row(base, pattern_label(FockState{mapped}));
    ASSERT_NE(b, nullptr);
    EXPECT_NEAR(b->probability, row.probability, 1e-12);
    EXPECT_NEAR(fidelity(b->state, row.state), 1.0, 1e-9);
  }
}

TEST(Gbsa, InputPermutationCovariance) {
  // Feeding pair n into port π(n) equals the default table with atoms relabelled.
  const std::vector<int> pi{3, 1, 4, 2};
  const auto base = run_gbsa(prepare_swap_input(4), quarter());
  const auto moved = run_gbsa(prepare_swap_input(4, {}, pi), quarter());
  ASSERT_EQ(base.size(), moved.size());
  for (const auto& row : moved) {
    const auto* b = find_row(base, pattern_label(row.pattern));
    ASSERT_NE(b, nullptr);
    EXPECT_NEAR(b->probability, row.probability, 1e-12);
    // Atom n of `moved` sits where atom π(n)-1 sits in `base`.
    QubitState relabelled(4);
    for (std::size_t i = 0; i < relabelled.dim(); ++i) {
      const std::string bits = row.state.bits(i);
      std::string target(4, '0');
      for (int n = 0; n < 4; ++n) target[pi[n] - 1] = bits[n];
      relabelled[relabelled.index(target)] = row.state[i];
    }
    EXPECT_NEAR(fidelity(b->state, relabelled), 1.0, 1e-9);
  }
}

TEST(Gbsa, ProbabilityCompleteness) {
  EXPECT_NEAR(total_probability(run_gbsa(prepare_swap_input(4), quarter())), 1.0, 1e-12);
  EXPECT_NEAR(total_probability(run_gbsa(prepare_swap_input(3), tritter())), 1.0, 1e-12);
  EXPECT_NEAR(total_probability(run_gbsa(prepare_swap_input(2), beam_splitter())), 1.0, 1e-12);
  for (int d = 1; d <= 3; ++d)
    EXPECT_NEAR(total_probability(subnetwork_swap(2, symmetric_multiport(d))), 1.0, 1e-12);
}

TEST(Gbsa, NormPreservedByEveryUnitary) {
  std::mt19937 rng(5);
  const auto input = prepare_swap_input(3);
  for (const auto& U : {quarter(), tritter(), symmetric_multiport(3), MultiportMatrix(oracle::random_unitary(5, rng), "r")})
    EXPECT_NEAR(propagate(input, U).norm2(), 1.0, 1e-12) << U.label();
}

TEST(Hom, TwoPhotonBunchingOnAny5050Splitter) {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> ph(-M_PI, M_PI);
  for (int trial = 0; trial < 5; ++trial) {
    const auto bs = with_phases(beam_splitter(), {ph(rng), ph(rng)}, {ph(rng), ph(rng)});
    HybridState in(0);
    in.add("", FockState{ModeCounts({{{1, Polarization::H}, 1}, {{2, Polarization::H}, 1}})}, 1.0);
    const auto out = propagate(in, bs);
    double coincidence = 0.0;
    for (const auto& [k, a] : out.terms())
      if (k.photons.occupations.distinct() == 2) coincidence += std::norm(a);
    EXPECT_NEAR(coincidence, 0.0, 1e-12);
    EXPECT_NEAR(out.norm2(), 1.0, 1e-12);
  }
}

TEST(Suppressed, Examples) {
  const auto quarter_list = suppressed_patterns(prepare_swap_input(4), quarter(), 4);
  std::set<std::string> q;
  for (const auto& p : quarter_list) q.insert(pattern_label(p));
  EXPECT_TRUE(q.contains("h1 h2 v1 v3"));
  EXPECT_FALSE(q.contains("h1 h2 h3 h4"));

  std::set<std::string> t;
  for (const auto& p : suppressed_patterns(prepare_swap_input(3), tritter(), 3)) t.insert(pattern_label(p));
  EXPECT_TRUE(t.contains("v1^2 v2"));

  // Suppressed ∪ reachable = every multiset; oracle agrees on what is reachable.
  const auto reachable = oracle::swap_table(quarter().entries(), 4, iota_ports(4));
  const auto every = oracle::all_patterns(4, {0, 1}, 4);
  EXPECT_EQ(q.size() + reachable.size(), every.size());
  for (const auto& s : q) EXPECT_FALSE(reachable.contains(s)) << s;
}

TEST(Aggregate, PublishedHeraldingProbabilities) {
  const auto q = run_gbsa(prepare_swap_input(4), quarter());
  EXPECT_NEAR(aggregate_heralding(q, DetectorModel::Threshold, {4, true}), 7.0 / 32.0, 1e-9);
  EXPECT_NEAR(aggregate_heralding(q, DetectorModel::NumberResolved, {4, false}), 7.0 / 8.0, 1e-9);

  const auto t = run_gbsa(prepare_swap_input(3), tritter());
  EXPECT_NEAR(aggregate_heralding(t, DetectorModel::Threshold, {3, true}), 0.25, 1e-9);
  EXPECT_NEAR(aggregate_heralding(t, DetectorModel::NumberResolved, {3, false}), 0.75, 1e-9);

  const auto b = run_gbsa(prepare_swap_input(2), beam_splitter());
  EXPECT_NEAR(aggregate_heralding(b, DetectorModel::Threshold, {2, true}), 0.5, 1e-9);
  EXPECT_THROW(aggregate_heralding(b, DetectorModel::Threshold, {0, true}), RangeError);
}

TEST(Aggregate, WithoutFilterCountsEveryAcceptedPattern) {
  const auto q = run_gbsa(prepare_swap_input(4), quarter());
  HeraldRule all{4, false, nullptr};
  EXPECT_NEAR(aggregate_heralding(q, DetectorModel::NumberResolved, all), 1.0, 1e-12);
}

TEST(Subnetwork, Examples) {
  const auto q = subnetwork_swap(2, quarter());
  EXPECT_NEAR(aggregate_heralding(q, DetectorModel::Threshold, {2, true}), 0.5, 1e-9);

  const auto b = subnetwork_swap(2, beam_splitter());
  int entangled = 0;
  for (const auto& r : b)
    if (is_genuinely_entangled(r.state)) {
      ++entangled;
      const double fp = fidelity(r.state, bell_state(BellKind::PsiPlus));
      const double fm = fidelity(r.state, bell_state(BellKind::PsiMinus));
      EXPECT_NEAR(std::max(fp, fm), 1.0, 1e-9) << pattern_label(r.pattern);
    }
  EXPECT_GT(entangled, 0);
  EXPECT_NEAR(aggregate_heralding(b, DetectorModel::Threshold, {2, true}), 0.5, 1e-9);

  const auto eight = subnetwork_swap(3, symmetric_multiport(3));
  EXPECT_NEAR(total_probability(eight), 1.0, 1e-12);
  EXPECT_GT(aggregate_heralding(eight, DetectorModel::Threshold, {3, true}), 0.0);

  EXPECT_THROW(subnetwork_swap(1, quarter()), RangeError);
  EXPECT_THROW(subnetwork_swap(5, quarter()), RangeError);
}

TEST(Wpe, StateExamples) {
  const double p = 0.06;
  const auto one = wpe_state(1, p, {0.4});
  ASSERT_EQ(one.size(), 2u);
  for (const auto& [k, a] : one.terms()) {
    if (k.atoms == "0") EXPECT_NEAR(std::abs(a - std::sqrt(1 - p)), 0.0, 1e-12);
    else EXPECT_NEAR(std::abs(a - std::sqrt(p) * std::polar(1.0, 0.4)), 0.0, 1e-12);
  }

  const auto two = wpe_state(2, p);
  double single = 0.0;
  for (const auto& [k, a] : two.terms())
    if (k.photons.total() == 1) single += std::norm(a);
  EXPECT_NEAR(single, 0.1128, 1e-12);

  const auto three = wpe_state(3, p);
  QubitState w(3);
  for (const auto& [k, a] : three.terms())
    if (k.photons.total() == 1) w[w.index(k.atoms)] = a;
  EXPECT_NEAR(fidelity(w.normalized(), dicke_state(1, 3)), 1.0, 1e-12);
  EXPECT_THROW(wpe_state(2, 0.0), RangeError);
}

TEST(Wpe, BeamSplitterSingleClickSign) {
  const double phi = 0.8;
  const auto rows = wpe_herald(wpe_state(2, 0.1, {0.0, phi}), beam_splitter(), 1, DetectorModel::NumberResolved);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) {
    EXPECT_NEAR(std::abs(r.state.amplitude("10")), r2, 1e-12);
    EXPECT_NEAR(std::abs(r.state.amplitude("01")), r2, 1e-12);
  }
  // Detector 1 vs 2 flips the relative sign.
  EXPECT_NEAR(std::abs(inner(rows[0].state, rows[1].state)), 0.0, 1e-12);
  const cplx rel0 = rows[0].state.amplitude("01") / rows[0].state.amplitude("10");
  const cplx rel1 = rows[1].state.amplitude("01") / rows[1].state.amplitude("10");
  EXPECT_NEAR(std::abs(rel0 + rel1), 0.0, 1e-12);
  // and the emission phase rides on the |01> branch.
  const auto flat = wpe_herald(wpe_state(2, 0.1), beam_splitter(), 1, DetectorModel::NumberResolved);
  const cplx rel_flat = flat[0].state.amplitude("01") / flat[0].state.amplitude("10");
  EXPECT_NEAR(std::abs(rel0 - rel_flat * std::polar(1.0, phi)), 0.0, 1e-12);
}

TEST(Wpe, TritterLowExcitationLimit) {
  const auto s = simulate_wpe(1, 3, 1e-6, tritter(), DetectorModel::Threshold);
  EXPECT_GT(s.fidelity, 1.0 - 1e-5);
}

TEST(Wpe, TritterTwoDistinctOutputsFraction) {
  const double p = 0.06;
  const auto rows = wpe_herald(wpe_state(3, p), tritter(), 2, DetectorModel::NumberResolved);
  double distinct = 0.0;
  for (const auto& r : rows)
    if (r.pattern.occupations.max_count() == 1) distinct += r.probability;
  EXPECT_NEAR(distinct / (3 * p * p * (1 - p)), 1.0 / 3.0, 1e-9);
}

TEST(Wpe, SimulationMatchesClosedForm) {
  for (int N = 1; N <= 5; ++N)
    for (int m = 1; m <= N; ++m)
      for (double p : {0.01, 0.06, 0.2}) {
        const auto s = simulate_wpe(m, N, p, default_eraser(N), DetectorModel::Threshold);
        EXPECT_NEAR(s.fidelity, wpe_fidelity(m, N, p), 1e-9) << m << "," << N << "," << p;
        EXPECT_NEAR(s.herald_probability, wpe_rate(m, N, p, 1.0).value, 1e-9) << m << "," << N << "," << p;
      }
}

TEST(Wpe, NumberResolvedRowsArePerfect) {
  const auto rows = wpe_herald(wpe_state(4, 0.2, {0.1, 0.2, 0.3, 0.4}), quarter(), 2, DetectorModel::NumberResolved,
                               dicke_state(2, 4, {0.1, 0.2, 0.3, 0.4}));
  ASSERT_FALSE(rows.empty());
  for (const auto& r : rows) EXPECT_NEAR(r.target_fidelity.value(), 1.0, 1e-9);
  EXPECT_NEAR(summarize_wpe(rows).herald_probability, 6 * 0.04 * 0.64, 1e-12);
}

TEST(Wpe, Errors) {
  EXPECT_THROW(wpe_herald(wpe_state(2, 0.1), beam_splitter(), 3, DetectorModel::Threshold), RangeError);
  EXPECT_THROW(simulate_wpe(1, 3, 0.1, beam_splitter(), DetectorModel::Threshold), DimensionError);
  EXPECT_THROW(default_eraser(9), RangeError);
}
