#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include <dlsim/sysim.hpp>

#include "support.hpp"

using namespace dlsim;
using namespace dlsim::sysim;

namespace {

SimConfig small_config(int n_ues, int n_subframes)
{
	SimConfig c;
	c.layout.n_ues = n_ues;
	c.n_subframes = n_subframes;
	return c;
}

} // namespace

TEST(SimConfig, JsonRoundTripAndDefaults)
{
	SimConfig c;
	c.layout.n_ues = 7;
	c.channel.shadowing_std_db = 3.5;
	c.feedback_delay = 1;
	const auto back = parse_config(canonical_json(c));
	EXPECT_EQ(canonical_json(back), canonical_json(c));
	EXPECT_EQ(config_digest(back), config_digest(c));

	const auto partial = parse_config(R"({"n_subframes": 10, "layout": {"n_ues": 3}})");
	EXPECT_EQ(partial.n_subframes, 10);
	EXPECT_EQ(partial.layout.n_ues, 3);
	EXPECT_DOUBLE_EQ(partial.layout.inter_site_distance_m, 500.0);
	EXPECT_EQ(partial.feedback_delay, 3);
}

TEST(SimConfig, RejectsBadInput)
{
	EXPECT_THROW(parse_config(R"({"n_subframes": 0})"), std::invalid_argument);
	EXPECT_THROW(parse_config(R"({"subframes": 10})"), std::invalid_argument);
	EXPECT_THROW(parse_config("{"), std::invalid_argument);
	EXPECT_THROW(parse_config(R"({"layout": {"n_ues": 0}})"), std::invalid_argument);
}

TEST(SimConfig, CoherenceFromSpeed)
{
	ChannelConfig c;
	// 5 km/h at 2 GHz: f_d = 9.27 Hz, 0.423 / f_d = 45.7 ms
	EXPECT_EQ(c.coherence(), 45);
	c.coherence_subframes = 1;
	EXPECT_EQ(c.coherence(), 1);
}

TEST(Layout, HexRingOfInterferers)
{
	const auto l = NetworkLayout::from_config(LayoutConfig{});
	ASSERT_EQ(l.interferer_sites.size(), 6u);
	for (const auto& s : l.interferer_sites)
		EXPECT_NEAR(distance(s, l.center), 500.0, 1e-9);
	for (std::size_t i = 0; i < 6; ++i)
		EXPECT_NEAR(distance(l.interferer_sites[i], l.interferer_sites[(i + 1) % 6]), 500.0, 1e-9);
}

TEST(Deploy, SingleUeInsideCell)
{
	auto l = NetworkLayout::from_config(LayoutConfig{});
	l.n_ues = 1;
	std::mt19937_64 rng(1);
	const auto p = deploy(l, rng);
	ASSERT_EQ(p.size(), 1u);
	const double d = distance(p[0], l.center);
	EXPECT_GE(d, l.min_distance_m);
	EXPECT_LE(d, l.cell_radius_m);
}

TEST(Deploy, MeanDistanceMatchesUniformAnnulus)
{
	auto l = NetworkLayout::from_config(LayoutConfig{});
	l.n_ues = 10000;
	std::mt19937_64 rng(2);
	const auto p = deploy(l, rng);
	double sum = 0.0;
	for (const auto& x : p) {
		const double d = distance(x, l.center);
		ASSERT_GE(d, l.min_distance_m - 1e-9);
		ASSERT_LE(d, l.cell_radius_m + 1e-9);
		sum += d;
	}
	const double r0 = l.min_distance_m, r1 = l.cell_radius_m;
	const double expected = 2.0 / 3.0 * (r1 * r1 * r1 - r0 * r0 * r0) / (r1 * r1 - r0 * r0);
	EXPECT_NEAR(sum / p.size(), expected, 0.02 * expected);
}

TEST(Deploy, DeterministicPerSeed)
{
	const auto l = NetworkLayout::from_config(LayoutConfig{});
	std::mt19937_64 a(5), b(5), c(6);
	EXPECT_EQ(deploy(l, a), deploy(l, b));
	std::mt19937_64 d(5);
	EXPECT_NE(deploy(l, d), deploy(l, c));
}

TEST(Channel, PathlossPowerLaw)
{
	ChannelConfig c;
	const double exponent = c.pathloss_slope_db / 10.0;
	for (double d : {50.0, 120.0, 400.0}) {
		const double ratio = std::pow(10.0, (pathloss_db(2 * d, c) - pathloss_db(d, c)) / 10.0);
		EXPECT_NEAR(ratio, std::pow(2.0, exponent), 1e-9);
	}
	EXPECT_NEAR(pathloss_db(1000.0, c), 128.1, 1e-12);
}

TEST(Channel, DeterministicGeometryWithoutRandomness)
{
	auto cfg = small_config(2, 10);
	cfg.channel.fading = false;
	cfg.channel.shadowing_std_db = 0.0;
	const std::vector<Position> ues{{100.0, 0.0}, {0.0, 200.0}};
	std::mt19937_64 r1(1), r2(99);
	Channel a(cfg, ues, r1), b(cfg, ues, r2);
	const double tx_rb = 46.0 - 20.0;
	for (int u = 0; u < 2; ++u) {
		const double d = distance(ues[static_cast<std::size_t>(u)], {});
		EXPECT_NEAR(10.0 * std::log10(a.gain(u, 0, 17)), tx_rb - pathloss_db(d, cfg.channel), 1e-9);
		for (int rb = 0; rb < 100; ++rb)
			EXPECT_EQ(a.sinr_db(u, rb), b.sinr_db(u, rb));
	}
	std::mt19937_64 f(3);
	EXPECT_FALSE(a.advance(0, f));
}

TEST(Channel, RayleighPowerHasUnitMean)
{
	auto cfg = small_config(1, 10);
	cfg.channel.coherence_subframes = 1;
	const std::vector<Position> ues{{100.0, 0.0}};
	std::mt19937_64 sh(1), fad(2);
	Channel ch(cfg, ues, sh);
	double sum = 0.0;
	long n = 0;
	for (int t = 0; n < 100000; ++t) {
		ASSERT_TRUE(ch.advance(t, fad));
		for (int rb = 0; rb < ch.n_rb(); ++rb, ++n)
			sum += ch.gain(0, 0, rb) / ch.mean_gain(0, 0);
	}
	EXPECT_NEAR(sum / n, 1.0, 0.02);
}

TEST(Channel, FadingHeldOverCoherenceBlock)
{
	auto cfg = small_config(1, 10);
	cfg.channel.coherence_subframes = 4;
	const std::vector<Position> ues{{100.0, 0.0}};
	std::mt19937_64 sh(1), fad(2);
	Channel ch(cfg, ues, sh);
	EXPECT_TRUE(ch.advance(0, fad));
	const double g = ch.gain(0, 0, 3);
	for (int t = 1; t < 4; ++t) {
		EXPECT_FALSE(ch.advance(t, fad));
		EXPECT_EQ(ch.gain(0, 0, 3), g);
	}
	EXPECT_TRUE(ch.advance(4, fad));
	EXPECT_NE(ch.gain(0, 0, 3), g);
}

TEST(Sinr, Definition)
{
	EXPECT_DOUBLE_EQ(per_rb_sinr(2.0, {}, 2.0), 1.0);
	const std::vector<double> one{1.0}, two{1.0, 0.5};
	EXPECT_LT(per_rb_sinr(4.0, two, 1.0), per_rb_sinr(4.0, one, 1.0));
	// cell edge: equal serving and interfering gain
	EXPECT_LE(10.0 * std::log10(per_rb_sinr(3.0, std::vector<double>{3.0}, 1e-3)), 0.0);
}

TEST(Sinr, CellEdgeGeometry)
{
	auto cfg = small_config(1, 1);
	cfg.channel.fading = false;
	cfg.channel.shadowing_std_db = 0.0;
	const auto l = NetworkLayout::from_config(cfg.layout);
	const Position mid{l.interferer_sites[0].x / 2.0, l.interferer_sites[0].y / 2.0};
	std::mt19937_64 sh(1);
	Channel ch(cfg, {mid}, sh);
	EXPECT_LE(ch.sinr_db(0, 0), 0.0);
}

TEST(Feedback, SubbandReportAtThresholds)
{
	const auto& lut = test::synthetic_lut();
	for (int c = 1; c <= 15; ++c) {
		const std::vector<double> s(12, lut.map.threshold(c));
		const auto r = subband_report(s, 6, lut);
		for (int x : r)
			EXPECT_EQ(x, c);
	}
	const std::vector<double> low(6, -50.0);
	EXPECT_EQ(subband_report(low, 6, lut), std::vector<int>(6, 0));
	std::vector<double> mixed(8, 30.0);
	std::fill(mixed.begin() + 6, mixed.end(), lut.map.threshold(3) + 0.1);
	const auto r = subband_report(mixed, 6, lut);
	EXPECT_EQ(r[0], 15);
	EXPECT_EQ(r[7], 3);
	EXPECT_THROW(subband_report(mixed, 0, lut), std::invalid_argument);
}

TEST(Feedback, ZeroDelayIsIdentity)
{
	FeedbackQueue q(0, 1, 2);
	const CqiReports a{{3, 4}};
	EXPECT_EQ(q.push(a), a);
}

TEST(Feedback, DelayedReports)
{
	FeedbackQueue q(3, 1, 1);
	EXPECT_EQ(q.size(), 3u);
	std::vector<CqiReports> seen;
	for (int t = 0; t < 8; ++t) {
		seen.push_back(q.push(CqiReports{{t + 1}}));
		EXPECT_EQ(q.size(), 3u);
	}
	for (int t = 0; t < 3; ++t)
		EXPECT_EQ(seen[static_cast<std::size_t>(t)][0][0], 0);
	for (int t = 3; t < 8; ++t)
		EXPECT_EQ(seen[static_cast<std::size_t>(t)][0][0], t - 3 + 1);
	EXPECT_THROW(FeedbackQueue(-1, 1, 1), std::invalid_argument);
}

TEST(Feedback, StaticChannelDelayInvisible)
{
	FeedbackQueue q(3, 2, 2);
	const CqiReports r{{5, 6}, {7, 8}};
	for (int t = 0; t < 3; ++t)
		q.push(r);
	for (int t = 0; t < 5; ++t)
		EXPECT_EQ(q.push(r), r);
}

TEST(Scheduler, NamesAndParsing)
{
	EXPECT_EQ(parse_scheduler("pf"), SchedulerId::pf);
	EXPECT_EQ(parse_scheduler("rr"), SchedulerId::rr);
	EXPECT_EQ(parse_scheduler("bestcqi"), SchedulerId::bestcqi);
	try {
		parse_scheduler("maxci");
		FAIL();
	} catch (const std::invalid_argument& e) {
		const std::string m = e.what();
		EXPECT_NE(m.find("pf, rr, bestcqi"), std::string::npos);
	}
}

TEST(Scheduler, RoundRobinCycle)
{
	const CqiReports r{{5, 5, 5, 5}, {5, 5, 5, 5}};
	int ptr = 0;
	auto d = schedule_rr(r, 4, ptr);
	EXPECT_EQ(d.rb_owner, (std::vector<int>{0, 1, 0, 1}));
	const CqiReports r3{{5, 5}, {5, 5}, {5, 5}};
	ptr = 0;
	d = schedule_rr(r3, 2, ptr);
	EXPECT_EQ(d.rb_owner, (std::vector<int>{0, 1}));
	d = schedule_rr(r3, 2, ptr);
	EXPECT_EQ(d.rb_owner, (std::vector<int>{2, 0}));
}

TEST(Scheduler, RoundRobinEqualShares)
{
	const int n_ues = 7, n_rb = 10, frames = 7;
	CqiReports r(n_ues, std::vector<int>(n_rb, 3));
	int ptr = 0;
	std::vector<int> count(n_ues, 0);
	for (int t = 0; t < frames; ++t) {
		const auto c = schedule_rr(r, n_rb, ptr).rb_counts();
		for (int u = 0; u < n_ues; ++u)
			count[static_cast<std::size_t>(u)] += c[static_cast<std::size_t>(u)];
	}
	for (int x : count)
		EXPECT_EQ(x, n_rb * frames / n_ues);
}

TEST(Scheduler, RoundRobinSkipsOutOfRange)
{
	const CqiReports r{{0, 0, 4}, {2, 0, 4}};
	int ptr = 0;
	const auto d = schedule_rr(r, 3, ptr);
	EXPECT_EQ(d.rb_owner, (std::vector<int>{1, -1, 0}));
	EXPECT_NO_THROW(d.validate(r));
}

TEST(Scheduler, BestCqi)
{
	const CqiReports dom{{9, 9, 9}, {3, 8, 1}};
	EXPECT_EQ(schedule_best_cqi(dom, 3).rb_owner, (std::vector<int>{0, 0, 0}));
	const CqiReports tie{{4, 7}, {4, 2}, {1, 7}};
	EXPECT_EQ(schedule_best_cqi(tie, 2).rb_owner, (std::vector<int>{0, 0}));
	CqiReports shifted = {{3, 6, 1}, {5, 2, 4}, {2, 6, 5}};
	const auto a = schedule_best_cqi(shifted, 3).rb_owner;
	for (auto& row : shifted)
		for (auto& c : row)
			c += 4;
	EXPECT_EQ(schedule_best_cqi(shifted, 3).rb_owner, a);
	const CqiReports none{{0}, {0}};
	EXPECT_EQ(schedule_best_cqi(none, 1).rb_owner[0], -1);
}

TEST(Scheduler, PfEqualAveragesIsBestCqi)
{
	const auto rates = rb_rates(GridConfig{}, kDefaultOverhead);
	std::mt19937_64 rng(4);
	std::uniform_int_distribution<int> cqi(0, 15);
	for (int trial = 0; trial < 50; ++trial) {
		CqiReports r(5, std::vector<int>(12));
		for (auto& row : r)
			for (auto& c : row)
				c = cqi(rng);
		EXPECT_EQ(schedule_pf(r, 12, std::vector<double>(5, 37.0), rates).rb_owner, schedule_best_cqi(r, 12).rb_owner);
	}
}

TEST(Scheduler, PfFavoursLowAverage)
{
	const auto rates = rb_rates(GridConfig{}, kDefaultOverhead);
	const CqiReports r{{6, 6}, {6, 6}, {6, 6}};
	EXPECT_EQ(schedule_pf(r, 2, {100.0, 20.0, 50.0}, rates).rb_owner, (std::vector<int>{1, 1}));
}

TEST(Scheduler, PfToyMatchesExhaustiveSearch)
{
	// hand-set per-subframe rates for 2 UEs x 2 RBs
	const double rate_table[10][2][2] = {
		{{10, 4}, {6, 8}},	{{10, 4}, {6, 8}}, {{3, 9}, {7, 7}},  {{5, 5}, {5, 5}},	 {{12, 1}, {2, 11}},
		{{8, 8}, {1, 9}},	{{2, 3}, {4, 1}},  {{9, 9}, {9, 9}},  {{1, 12}, {12, 1}}, {{6, 2}, {3, 7}},
	};
	const double tc = 4.0;
	std::array<double, kNumCqi + 1> rates{};
	for (int c = 1; c <= kNumCqi; ++c)
		rates[static_cast<std::size_t>(c)] = c;

	std::vector<double> avg{1.0, 1.0}, oracle_avg{1.0, 1.0};
	for (const auto& frame : rate_table) {
		CqiReports r(2, std::vector<int>(2));
		for (int u = 0; u < 2; ++u)
			for (int b = 0; b < 2; ++b)
				r[static_cast<std::size_t>(u)][static_cast<std::size_t>(b)] = static_cast<int>(frame[u][b]);
		const auto d = schedule_pf(r, 2, avg, rates);

		// enumerate all four allocations, keep the largest summed metric (first wins ties)
		int best_mask = -1;
		double best = -1.0;
		for (int mask = 0; mask < 4; ++mask) {
			double m = 0.0;
			for (int b = 0; b < 2; ++b) {
				const int u = (mask >> b) & 1;
				m += frame[u][b] / oracle_avg[static_cast<std::size_t>(u)];
			}
			if (m > best + 1e-12) {
				best = m;
				best_mask = mask;
			}
		}
		std::vector<double> served(2, 0.0), oracle_served(2, 0.0);
		for (int b = 0; b < 2; ++b) {
			const int want = (best_mask >> b) & 1;
			EXPECT_EQ(d.rb_owner[static_cast<std::size_t>(b)], want);
			oracle_served[static_cast<std::size_t>(want)] += frame[want][b];
			const int got = d.rb_owner[static_cast<std::size_t>(b)];
			served[static_cast<std::size_t>(got)] += rates[static_cast<std::size_t>(r[static_cast<std::size_t>(got)][static_cast<std::size_t>(b)])];
		}
		pf_update(avg, served, tc);
		for (int u = 0; u < 2; ++u)
			oracle_avg[static_cast<std::size_t>(u)]
				= (1.0 - 1.0 / tc) * oracle_avg[static_cast<std::size_t>(u)] + oracle_served[static_cast<std::size_t>(u)] / tc;
	}
	EXPECT_NEAR(avg[0], oracle_avg[0], 1e-12);
	EXPECT_NEAR(avg[1], oracle_avg[1], 1e-12);
}

TEST(Scheduler, ValidateCatchesCqiZeroOwner)
{
	ScheduleDecision d(2, 2);
	d.rb_owner = {0, 1};
	EXPECT_THROW(d.validate(CqiReports{{3, 3}, {3, 0}}), std::logic_error);
	d.rb_owner = {0, 5};
	EXPECT_THROW(d.validate(CqiReports{{3, 3}, {3, 3}}), std::logic_error);
}

TEST(Mcs, UniformReportsKeepTheirCqi)
{
	const auto& lut = test::synthetic_lut();
	ScheduleDecision d(4, 2);
	d.rb_owner = {0, 0, 1, -1};
	const CqiReports r{{9, 9, 0, 0}, {0, 0, 4, 0}};
	assign_mcs(d, r, lut);
	EXPECT_EQ(d.ue_cqi, (std::vector<int>{9, 4}));
}

TEST(Mcs, MixedReportsLieBetween)
{
	const auto& lut = test::synthetic_lut();
	ScheduleDecision d(3, 1);
	d.rb_owner = {0, 0, 0};
	const CqiReports r{{3, 12, 12}};
	assign_mcs(d, r, lut);
	EXPECT_GE(d.ue_cqi[0], 3);
	EXPECT_LE(d.ue_cqi[0], 12);
}

TEST(Transmit, FarAboveAndBelowWaterfall)
{
	const auto& lut = test::synthetic_lut();
	const GridConfig g;
	const std::vector<double> high(5, 40.0), low(5, -30.0);
	const auto ok = transmit_one(0, 7, high, lut, g, kDefaultOverhead, 0.0);
	EXPECT_TRUE(ok.success);
	EXPECT_EQ(ok.bits, tb_bits(cqi_entry(7), 5, g));
	const auto bad = transmit_one(0, 7, low, lut, g, kDefaultOverhead, 0.999999);
	EXPECT_FALSE(bad.success);
	EXPECT_EQ(bad.bits, 0);
}

TEST(Transmit, BernoulliAtTenPercent)
{
	const auto& lut = test::synthetic_lut();
	const GridConfig g;
	const std::vector<double> at(4, lut.map.threshold(5));
	std::mt19937_64 rng(10);
	std::uniform_real_distribution<double> u(0.0, 1.0);
	int fails = 0;
	for (int i = 0; i < 10000; ++i) {
		const auto r = transmit_one(0, 5, at, lut, g, kDefaultOverhead, u(rng));
		EXPECT_NEAR(r.bler, 0.1, 1e-9);
		fails += r.success ? 0 : 1;
	}
	EXPECT_NEAR(fails / 10000.0, 0.10, 0.01);
}

TEST(Transmit, UnknownCurveThrows)
{
	auto lut = test::synthetic_lut();
	lut.curves.pop_back();
	EXPECT_THROW(transmit_one(0, 15, std::vector<double>{30.0}, lut, GridConfig{}, kDefaultOverhead, 0.5),
				 std::out_of_range);
}

TEST(Drop, RejectsEmptySimulation)
{
	EXPECT_THROW(run_drop(small_config(3, 0), test::synthetic_lut(), SchedulerId::rr, 1), std::invalid_argument);
	LutData empty;
	EXPECT_THROW(run_drop(small_config(3, 5), empty, SchedulerId::rr, 1), std::invalid_argument);
}

TEST(Drop, DeterministicAndConsistent)
{
	const auto cfg = small_config(6, 200);
	for (auto s : kSchedulers) {
		const auto a = run_drop(cfg, test::synthetic_lut(), s, 11);
		const auto b = run_drop(cfg, test::synthetic_lut(), s, 11);
		EXPECT_EQ(a, b);
		ASSERT_EQ(a.throughput_bps.size(), 6u);
		for (std::size_t u = 0; u < 6; ++u) {
			EXPECT_DOUBLE_EQ(a.throughput_bps[u], a.served_bits[u] / 0.2);
			EXPECT_GE(a.throughput_bps[u], 0.0);
		}
		EXPECT_LE(std::accumulate(a.rb_allocations.begin(), a.rb_allocations.end(), 0LL), 100LL * 200);
		EXPECT_EQ(a.config_digest, config_digest(cfg));
	}
	const auto c = run_drop(cfg, test::synthetic_lut(), SchedulerId::rr, 12);
	EXPECT_NE(c.served_bits, run_drop(cfg, test::synthetic_lut(), SchedulerId::rr, 11).served_bits);
}

TEST(Drop, SingleUeSameUnderAllSchedulers)
{
	const auto cfg = small_config(1, 300);
	const auto rr = run_drop(cfg, test::synthetic_lut(), SchedulerId::rr, 3);
	EXPECT_GT(rr.cell_bits(), 0);
	EXPECT_EQ(run_drop(cfg, test::synthetic_lut(), SchedulerId::pf, 3).throughput_bps, rr.throughput_bps);
	EXPECT_EQ(run_drop(cfg, test::synthetic_lut(), SchedulerId::bestcqi, 3).throughput_bps, rr.throughput_bps);
}

TEST(Drop, ColocatedPfSharesMatchRoundRobin)
{
	auto cfg = small_config(5, 400);
	cfg.layout.colocated = true;
	const auto rr = run_drop(cfg, test::synthetic_lut(), SchedulerId::rr, 4);
	const auto pf = run_drop(cfg, test::synthetic_lut(), SchedulerId::pf, 4);
	const double total_rr = std::accumulate(rr.rb_allocations.begin(), rr.rb_allocations.end(), 0.0);
	const double total_pf = std::accumulate(pf.rb_allocations.begin(), pf.rb_allocations.end(), 0.0);
	ASSERT_GT(total_rr, 10000.0);
	for (std::size_t u = 0; u < 5; ++u)
		EXPECT_NEAR(pf.rb_allocations[u] / total_pf, rr.rb_allocations[u] / total_rr, 0.05 * rr.rb_allocations[u] / total_rr);
}

TEST(Metrics, CdfStepAndMonotone)
{
	const auto step = throughput_cdf({5.0, 5.0, 5.0});
	ASSERT_EQ(step.size(), 1u);
	EXPECT_EQ(step[0], (CdfPoint{5.0, 1.0}));
	const auto c = throughput_cdf({3.0, 1.0, 2.0, 2.0});
	ASSERT_EQ(c.size(), 3u);
	EXPECT_EQ(c[0], (CdfPoint{1.0, 0.25}));
	EXPECT_EQ(c[1], (CdfPoint{2.0, 0.75}));
	EXPECT_EQ(c[2], (CdfPoint{3.0, 1.0}));
	EXPECT_THROW(throughput_cdf({}), std::invalid_argument);
}

TEST(Metrics, NearestRankPercentiles)
{
	std::vector<double> x(20);
	std::iota(x.begin(), x.end(), 1.0);
	EXPECT_EQ(percentile(x, 50.0), 10.0);
	EXPECT_EQ(percentile(x, 95.0), 19.0);
	EXPECT_EQ(percentile(x, 100.0), 20.0);
	EXPECT_EQ(percentile(x, 1.0), 1.0);
	EXPECT_THROW(percentile(x, 0.0), std::invalid_argument);
	EXPECT_THROW(percentile({}, 50.0), std::invalid_argument);
}

TEST(Metrics, JainIndex)
{
	EXPECT_DOUBLE_EQ(jain_index({2.0, 2.0, 2.0}), 1.0);
	EXPECT_DOUBLE_EQ(jain_index({1.0, 0.0, 0.0, 0.0}), 0.25);
	EXPECT_DOUBLE_EQ(jain_index({1.0, 2.0}), 9.0 / 10.0);
}

TEST(Metrics, SummaryHasThreeRows)
{
	std::ostringstream os;
	write_summary_csv(os, "pf", {1.0, 2.0, 3.0});
	const auto s = os.str();
	EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 4);
	EXPECT_NE(s.find("pf,50,2\n"), std::string::npos);
	EXPECT_NE(s.find("pf,100,3\n"), std::string::npos);
}

TEST(Metrics, ThroughputCsvRoundTrip)
{
	DropResult a;
	a.throughput_bps = {1.5, 2.25};
	DropResult b;
	b.throughput_bps = {3.0};
	std::stringstream ss;
	write_throughput_csv(ss, {a, b});
	EXPECT_EQ(read_throughput_csv(ss), (std::vector<double>{1.5, 2.25, 3.0}));
}
