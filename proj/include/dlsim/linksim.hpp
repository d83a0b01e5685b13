#ifndef DLSIM_LINKSIM_HPP
#define DLSIM_LINKSIM_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <istream>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "crc.hpp"
#include "detail/text.hpp"
#include "modem.hpp"
#include "numerology.hpp"
#include "turbo.hpp"

namespace dlsim::linksim {

struct BlerPoint
{
	double snr_db = 0.0;
	double bler = 0.0;
	std::int64_t n_blocks = 0;
	std::int64_t n_errors = 0;

	double standard_error() const
	{
		return n_blocks > 0 ? std::sqrt(bler * (1.0 - bler) / static_cast<double>(n_blocks)) : 0.0;
	}
	friend bool operator==(const BlerPoint&, const BlerPoint&) = default;
};

struct BlerCurve
{
	int cqi_index = 0;
	std::vector<BlerPoint> points;

	friend bool operator==(const BlerCurve&, const BlerCurve&) = default;
};

/// Uniform grid from lo to hi inclusive.
inline std::vector<double> snr_grid(double lo_db, double hi_db, double step_db)
{
	if (!(step_db > 0.0) || hi_db < lo_db)
		throw std::invalid_argument("snr_grid: need step > 0 and hi >= lo");
	std::vector<double> g;
	const auto n = static_cast<int>(std::floor((hi_db - lo_db) / step_db + 1e-9));
	for (int i = 0; i <= n; ++i)
		g.push_back(lo_db + i * step_db);
	return g;
}

struct LinkSimConfig
{
	std::vector<double> snr_grid_db = snr_grid(-10.0, 22.0, 0.5);
	std::int64_t min_blocks = 100;
	std::int64_t min_block_errors = 50;
	std::int64_t max_blocks = 20000;
	std::uint64_t rng_seed = 1;
	turbo::TurboConfig turbo;
	/// Stop a curve after this many consecutive error-free points (0 = run the full grid).
	int clean_points_to_stop = 2;
	/// Worker threads for multi-curve runs (0 = hardware concurrency).
	int threads = 0;

	void validate() const
	{
		if (snr_grid_db.empty())
			throw std::invalid_argument("LinkSimConfig: empty SNR grid");
		for (std::size_t i = 1; i < snr_grid_db.size(); ++i)
			if (!(snr_grid_db[i] > snr_grid_db[i - 1]))
				throw std::invalid_argument("LinkSimConfig: SNR grid must be strictly increasing");
		if (min_blocks < 100)
			throw std::invalid_argument("LinkSimConfig: min_blocks must be >= 100");
		if (min_block_errors < 20)
			throw std::invalid_argument("LinkSimConfig: min_block_errors must be >= 20");
		if (max_blocks < min_blocks)
			throw std::invalid_argument("LinkSimConfig: max_blocks must be >= min_blocks");
		if (clean_points_to_stop < 0)
			throw std::invalid_argument("LinkSimConfig: clean_points_to_stop must be >= 0");
		turbo.validate();
	}
};

/// Generator for one (seed, cqi, snr point) task; independent of scheduling.
inline std::mt19937_64 point_rng(std::uint64_t seed, int cqi_index, std::size_t snr_index)
{
	std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
					  static_cast<std::uint32_t>(cqi_index), static_cast<std::uint32_t>(snr_index)};
	return std::mt19937_64(seq);
}

/// Transmits one block through encode -> rate match -> modulate -> AWGN ->
/// demap -> decode. Returns true on block error.
class BlockSimulator
{
public:
	BlockSimulator(const CqiEntry& cqi, const turbo::TurboConfig& tcfg)
		: cqi_(cqi), codec_(tcfg)
	{
		if (tcfg.block_length_k <= kCrcBits)
			throw std::invalid_argument("block length must exceed the CRC length");
	}

	template <typename Rng>
	bool simulate_block(double snr_db, Rng& rng) const
	{
		const auto k = static_cast<std::size_t>(codec_.k());
		Bits payload(k - kCrcBits);
		std::uint64_t word = 0;
		for (std::size_t i = 0; i < payload.size(); ++i) {
			if (i % 64 == 0)
				word = rng();
			payload[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
		}
		const Bits info = attach_crc(payload);

		Bits tx = codec_.rate_match(codec_.encode(info), cqi_.code_rate);
		const std::size_t e = tx.size();
		const auto m = static_cast<std::size_t>(cqi_.modulation_bits);
		tx.resize((e + m - 1) / m * m, 0); // filler to a whole number of symbols

		const auto rx = awgn(std::span<const Symbol>(modulate(tx, cqi_.modulation_bits)), snr_db, rng);
		const double nv = std::max(noise_variance(snr_db), 1e-12);
		auto llr = soft_demap(rx, cqi_.modulation_bits, nv);
		llr.resize(e);

		const auto dec = codec_.decode(llr, cqi_.code_rate);
		return dec.bits != info;
	}

private:
	CqiEntry cqi_;
	turbo::TurboCodec codec_;
};

/// Monte Carlo BLER curve for one CQI over the configured SNR grid.
inline BlerCurve run_bler(const CqiEntry& cqi, const LinkSimConfig& cfg)
{
	cfg.validate();
	if (cqi.cqi_index < 1 || cqi.cqi_index > kNumCqi)
		throw std::invalid_argument("run_bler: CQI index outside 1..15");
	BlockSimulator sim(cqi, cfg.turbo);

	BlerCurve curve;
	curve.cqi_index = cqi.cqi_index;
	int clean_run = 0;
	for (std::size_t i = 0; i < cfg.snr_grid_db.size(); ++i) {
		auto rng = point_rng(cfg.rng_seed, cqi.cqi_index, i);
		BlerPoint pt;
		pt.snr_db = cfg.snr_grid_db[i];
		while (pt.n_blocks < cfg.min_blocks || (pt.n_errors < cfg.min_block_errors && pt.n_blocks < cfg.max_blocks)) {
			pt.n_errors += sim.simulate_block(pt.snr_db, rng) ? 1 : 0;
			++pt.n_blocks;
		}
		pt.bler = static_cast<double>(pt.n_errors) / static_cast<double>(pt.n_blocks);
		curve.points.push_back(pt);

		clean_run = pt.n_errors == 0 ? clean_run + 1 : 0;
		if (cfg.clean_points_to_stop > 0 && clean_run >= cfg.clean_points_to_stop)
			break;
	}
	return curve;
}

/// Curves for several CQIs, one task per CQI spread over worker threads.
inline std::vector<BlerCurve> run_bler_all(const std::vector<int>& cqi_indices, const LinkSimConfig& cfg)
{
	cfg.validate();
	std::vector<BlerCurve> out(cqi_indices.size());
	std::atomic<std::size_t> next{0};
	std::exception_ptr failure;
	std::mutex failure_mutex;
	auto worker = [&] {
		for (std::size_t i = next++; i < cqi_indices.size(); i = next++) {
			try {
				out[i] = run_bler(cqi_entry(cqi_indices[i]), cfg);
			} catch (...) {
				std::lock_guard lock(failure_mutex);
				if (!failure)
					failure = std::current_exception();
			}
		}
	};
	unsigned n = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
	n = std::clamp<unsigned>(n, 1u, static_cast<unsigned>(std::max<std::size_t>(cqi_indices.size(), 1)));
	std::vector<std::thread> pool;
	for (unsigned t = 1; t < n; ++t)
		pool.emplace_back(worker);
	worker();
	for (auto& t : pool)
		t.join();
	if (failure)
		std::rethrow_exception(failure);
	return out;
}

/// Usable symbol rate x efficiency x (1 - BLER), in bits per second.
inline double max_ue_capacity(double symbol_rate, const CqiEntry& cqi, double bler)
{
	if (!(bler >= 0.0 && bler <= 1.0))
		throw std::invalid_argument("max_ue_capacity: BLER must lie in [0, 1]");
	return symbol_rate * cqi.efficiency * (1.0 - bler);
}

/// Usable modulation symbols per second over n_rb RBs.
inline double usable_symbol_rate(const GridConfig& grid, int n_rb, double overhead_fraction = kDefaultOverhead)
{
	return static_cast<double>(n_rb) * data_symbols_per_rb_pair(grid, overhead_fraction) / grid.subframe_duration_s;
}

// CSV: cqi,snr_db,bler,n_blocks,n_errors
inline void write_curves_csv(std::ostream& os, const std::vector<BlerCurve>& curves)
{
	os << "cqi,snr_db,bler,n_blocks,n_errors\n";
	for (const auto& c : curves)
		for (const auto& p : c.points)
			os << c.cqi_index << ',' << detail::format_double(p.snr_db) << ',' << detail::format_double(p.bler) << ','
			   << p.n_blocks << ',' << p.n_errors << '\n';
}

inline std::vector<BlerCurve> read_curves_csv(std::istream& is)
{
	std::string line;
	if (!std::getline(is, line) || detail::trim(line) != "cqi,snr_db,bler,n_blocks,n_errors")
		throw std::runtime_error("curves CSV: missing or unexpected header");
	std::map<int, BlerCurve> by_cqi;
	int line_no = 1;
	while (std::getline(is, line)) {
		++line_no;
		if (detail::trim(line).empty())
			continue;
		const auto f = detail::split(line, ',');
		if (f.size() != 5)
			throw std::runtime_error("curves CSV line " + std::to_string(line_no) + ": expected 5 fields");
		BlerPoint p;
		const int cqi = detail::parse_int<int>(f[0]);
		p.snr_db = detail::parse_double(f[1]);
		p.bler = detail::parse_double(f[2]);
		p.n_blocks = detail::parse_int<std::int64_t>(f[3]);
		p.n_errors = detail::parse_int<std::int64_t>(f[4]);
		if (p.n_blocks <= 0 || p.n_errors < 0 || p.n_errors > p.n_blocks)
			throw std::runtime_error("curves CSV line " + std::to_string(line_no) + ": inconsistent counts");
		auto& c = by_cqi[cqi];
		c.cqi_index = cqi;
		if (!c.points.empty() && !(p.snr_db > c.points.back().snr_db))
			throw std::runtime_error("curves CSV line " + std::to_string(line_no) + ": SNR not increasing");
		c.points.push_back(p);
	}
	std::vector<BlerCurve> out;
	for (auto& [cqi, c] : by_cqi)
		out.push_back(std::move(c));
	return out;
}

} // namespace dlsim::linksim

#endif // DLSIM_LINKSIM_HPP
