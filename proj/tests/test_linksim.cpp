#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <dlsim/linksim.hpp>
#include <dlsim/modem.hpp>

using namespace dlsim;
using namespace dlsim::linksim;

namespace {

Bits pattern_bits(int value, int m)
{
	Bits b(static_cast<std::size_t>(m));
	for (int j = 0; j < m; ++j)
		b[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>((value >> (m - 1 - j)) & 1);
	return b;
}

// Max-log LLRs by exhaustive search over the full two-dimensional alphabet.
std::vector<double> brute_force_llr(Symbol y, int m, double n0)
{
	std::vector<double> best0(static_cast<std::size_t>(m), 1e300), best1(static_cast<std::size_t>(m), 1e300);
	for (int v = 0; v < (1 << m); ++v) {
		const auto b = pattern_bits(v, m);
		const double d = std::norm(y - constellation(m).map(b));
		for (int j = 0; j < m; ++j) {
			auto& slot = b[static_cast<std::size_t>(j)] ? best1[static_cast<std::size_t>(j)] : best0[static_cast<std::size_t>(j)];
			slot = std::min(slot, d);
		}
	}
	std::vector<double> l(static_cast<std::size_t>(m));
	for (int j = 0; j < m; ++j)
		l[static_cast<std::size_t>(j)] = (best1[static_cast<std::size_t>(j)] - best0[static_cast<std::size_t>(j)]) / n0;
	return l;
}

LinkSimConfig quick_config()
{
	LinkSimConfig c;
	c.snr_grid_db = snr_grid(-9.0, -6.0, 1.0);
	c.min_blocks = 100;
	c.min_block_errors = 20;
	c.max_blocks = 200;
	c.rng_seed = 7;
	c.threads = 1;
	return c;
}

} // namespace

TEST(Modem, UnitAverageEnergy)
{
	for (int m : {2, 4, 6}) {
		double e = 0.0;
		for (int v = 0; v < (1 << m); ++v)
			e += std::norm(constellation(m).map(pattern_bits(v, m)));
		EXPECT_NEAR(e / (1 << m), 1.0, 1e-12) << m;
	}
}

TEST(Modem, AxisLevelsAreGrayCoded)
{
	for (int m : {2, 4, 6}) {
		const auto& c = constellation(m);
		std::vector<std::pair<double, int>> lv;
		for (int p = 0; p < c.levels_per_axis(); ++p)
			lv.emplace_back(c.level(p), p);
		std::sort(lv.begin(), lv.end());
		for (std::size_t i = 1; i < lv.size(); ++i) {
			EXPECT_EQ(std::popcount(static_cast<unsigned>(lv[i].second ^ lv[i - 1].second)), 1);
			EXPECT_NEAR(lv[i].first - lv[i - 1].first, lv[1].first - lv[0].first, 1e-12);
		}
	}
}

TEST(Modem, FirstAxisBitIsSign)
{
	const auto& c = constellation(4);
	EXPECT_GT(c.map(Bits{0, 0, 0, 0}).real(), 0.0);
	EXPECT_GT(c.map(Bits{0, 0, 0, 0}).imag(), 0.0);
	EXPECT_LT(c.map(Bits{1, 0, 0, 0}).real(), 0.0);
	EXPECT_LT(c.map(Bits{0, 1, 0, 0}).imag(), 0.0);
	EXPECT_NEAR(c.map(Bits{0, 0, 0, 0}).real(), 1.0 / std::sqrt(10.0), 1e-12);
	EXPECT_NEAR(c.map(Bits{0, 0, 1, 0}).real(), 3.0 / std::sqrt(10.0), 1e-12);
}

TEST(Modem, UnsupportedOrderThrows)
{
	EXPECT_THROW(constellation(3), std::invalid_argument);
	EXPECT_THROW(modulate(Bits(5), 2), std::invalid_argument);
}

TEST(Modem, DemapperMatchesExhaustiveMaxLog)
{
	std::mt19937_64 rng(1);
	std::normal_distribution<double> n(0.0, 0.7);
	for (int m : {2, 4, 6}) {
		for (int trial = 0; trial < 200; ++trial) {
			const Symbol y(n(rng), n(rng));
			const double n0 = 0.3;
			const auto got = soft_demap(std::span<const Symbol>(&y, 1), m, n0);
			const auto want = brute_force_llr(y, m, n0);
			for (int j = 0; j < m; ++j)
				EXPECT_NEAR(got[static_cast<std::size_t>(j)], want[static_cast<std::size_t>(j)],
							1e-4 * (1.0 + std::abs(want[static_cast<std::size_t>(j)])));
		}
	}
}

TEST(Modem, NoiselessHardDecisionsRecoverBits)
{
	std::mt19937_64 rng(2);
	for (int m : {2, 4, 6}) {
		Bits b(static_cast<std::size_t>(m) * 300);
		for (auto& x : b)
			x = static_cast<std::uint8_t>(rng() & 1u);
		const auto llr = soft_demap(modulate(b, m), m, 0.01);
		for (std::size_t i = 0; i < b.size(); ++i)
			ASSERT_EQ(llr[i] < 0.0f, b[i] == 1) << m << ' ' << i;
	}
}

TEST(Modem, AwgnVarianceMatchesSnr)
{
	std::mt19937_64 rng(3);
	const std::vector<Symbol> zeros(100000);
	for (double snr : {0.0, 10.0}) {
		const auto y = awgn(std::span<const Symbol>(zeros), snr, rng);
		double p = 0.0, re = 0.0;
		for (const auto& s : y) {
			p += std::norm(s);
			re += s.real() * s.real();
		}
		const double var = std::pow(10.0, -snr / 10.0);
		EXPECT_NEAR(p / y.size(), var, 0.02 * var);
		EXPECT_NEAR(re / y.size(), var / 2.0, 0.02 * var);
	}
	EXPECT_EQ(noise_variance(std::numeric_limits<double>::infinity()), 0.0);
	const auto clean = awgn(std::span<const Symbol>(zeros), std::numeric_limits<double>::infinity(), rng);
	EXPECT_EQ(clean, zeros);
}

TEST(LinkSim, SnrGridEndpoints)
{
	const auto g = snr_grid(-10.0, 22.0, 0.5);
	EXPECT_EQ(g.size(), 65u);
	EXPECT_DOUBLE_EQ(g.front(), -10.0);
	EXPECT_DOUBLE_EQ(g.back(), 22.0);
	EXPECT_THROW(snr_grid(0.0, 1.0, 0.0), std::invalid_argument);
}

TEST(LinkSim, ConfigValidation)
{
	LinkSimConfig c;
	EXPECT_NO_THROW(c.validate());
	c.min_blocks = 50;
	EXPECT_THROW(c.validate(), std::invalid_argument);
	c = {};
	c.max_blocks = 99;
	EXPECT_THROW(c.validate(), std::invalid_argument);
	c = {};
	c.snr_grid_db = {1.0, 1.0};
	EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(LinkSim, StopRuleAndDeterminism)
{
	const auto cfg = quick_config();
	const auto a = run_bler(cqi_entry(1), cfg);
	const auto b = run_bler(cqi_entry(1), cfg);
	EXPECT_EQ(a, b);
	for (const auto& p : a.points) {
		EXPECT_GE(p.n_blocks, cfg.min_blocks);
		EXPECT_LE(p.n_blocks, cfg.max_blocks);
		EXPECT_TRUE(p.n_errors >= cfg.min_block_errors || p.n_blocks == cfg.max_blocks);
		EXPECT_DOUBLE_EQ(p.bler, static_cast<double>(p.n_errors) / p.n_blocks);
	}
	EXPECT_EQ(a.points.front().bler, 1.0);
	EXPECT_GE(a.points.front().bler, a.points.back().bler);
}

TEST(LinkSim, SeedChangesSamples)
{
	auto cfg = quick_config();
	cfg.snr_grid_db = snr_grid(-8.0, -5.0, 0.5);
	cfg.clean_points_to_stop = 0;
	const auto a = run_bler(cqi_entry(1), cfg);
	cfg.rng_seed = 8;
	const auto b = run_bler(cqi_entry(1), cfg);
	EXPECT_NE(a, b);
}

TEST(LinkSim, CleanPointsEndTheCurve)
{
	auto cfg = quick_config();
	cfg.snr_grid_db = snr_grid(-4.0, 10.0, 1.0);
	cfg.clean_points_to_stop = 2;
	const auto c = run_bler(cqi_entry(1), cfg);
	ASSERT_GE(c.points.size(), 2u);
	EXPECT_LT(c.points.size(), cfg.snr_grid_db.size());
	EXPECT_EQ(c.points[c.points.size() - 1].n_errors, 0);
	EXPECT_EQ(c.points[c.points.size() - 2].n_errors, 0);
}

TEST(LinkSim, ParallelRunMatchesSerial)
{
	auto cfg = quick_config();
	cfg.snr_grid_db = {-8.0, 0.0};
	cfg.threads = 2;
	const auto all = run_bler_all({3, 1}, cfg);
	ASSERT_EQ(all.size(), 2u);
	EXPECT_EQ(all[0], run_bler(cqi_entry(3), cfg));
	EXPECT_EQ(all[1], run_bler(cqi_entry(1), cfg));
}

TEST(LinkSim, CapacityFormula)
{
	GridConfig g;
	const double rate = usable_symbol_rate(g, 100);
	EXPECT_DOUBLE_EQ(rate, 12.6e6);
	EXPECT_NEAR(max_ue_capacity(rate, cqi_entry(15), 0.0), 12.6e6 * 5.55, 1e-3);
	EXPECT_NEAR(max_ue_capacity(rate, cqi_entry(15), 0.1), 12.6e6 * 5.55 * 0.9, 1e-3);
	EXPECT_THROW(max_ue_capacity(rate, cqi_entry(1), 1.5), std::invalid_argument);
}

TEST(LinkSim, CurvesCsvRoundTrip)
{
	std::vector<BlerCurve> curves(2);
	curves[0].cqi_index = 2;
	curves[0].points = {{-3.0, 1.0, 100, 100}, {-2.5, 0.123456789, 810, 100}};
	curves[1].cqi_index = 11;
	curves[1].points = {{14.0, 0.02, 5000, 100}};
	std::stringstream ss;
	write_curves_csv(ss, curves);
	EXPECT_EQ(read_curves_csv(ss), curves);

	std::stringstream bad("snr,bler\n");
	EXPECT_THROW(read_curves_csv(bad), std::runtime_error);
	std::stringstream inconsistent("cqi,snr_db,bler,n_blocks,n_errors\n1,0,0.5,10,20\n");
	EXPECT_THROW(read_curves_csv(inconsistent), std::runtime_error);
}
