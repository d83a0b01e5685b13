#ifndef DLSIM_NUMEROLOGY_HPP
#define DLSIM_NUMEROLOGY_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

#include "detail/text.hpp"

namespace dlsim {

/// LTE downlink resource grid, normal cyclic prefix.
struct GridConfig
{
	double bandwidth_hz = 20e6;
	int subcarriers_per_rb = 12;
	int n_rb = 100;
	double subcarrier_spacing_hz = 15e3;
	int symbols_per_slot = 7;
	int slots_per_subframe = 2;
	int subframes_per_frame = 10;
	double subframe_duration_s = 1e-3;

	double rb_bandwidth_hz() const { return subcarriers_per_rb * subcarrier_spacing_hz; }

	void validate() const
	{
		if (subcarriers_per_rb <= 0 || n_rb <= 0 || symbols_per_slot <= 0
			|| slots_per_subframe <= 0 || subframes_per_frame <= 0)
			throw std::invalid_argument("GridConfig: counts must be strictly positive");
		if (bandwidth_hz <= 0 || subcarrier_spacing_hz <= 0 || subframe_duration_s <= 0)
			throw std::invalid_argument("GridConfig: bandwidth, spacing and duration must be positive");
		if (n_rb * rb_bandwidth_hz() > bandwidth_hz)
			throw std::invalid_argument("GridConfig: occupied bandwidth exceeds channel bandwidth");
	}
};

struct CqiEntry
{
	int cqi_index = 0;
	int modulation_bits = 0; ///< 2 = QPSK, 4 = 16QAM, 6 = 64QAM
	double code_rate = 0.0;
	double efficiency = 0.0; ///< bits per modulation symbol

	friend bool operator==(const CqiEntry&, const CqiEntry&) = default;
};

inline constexpr int kNumCqi = 15;
inline constexpr double kDefaultOverhead = 0.25;

namespace detail {

constexpr CqiEntry make_cqi(int idx, int bits, double rate)
{
	return CqiEntry{idx, bits, rate, bits * rate};
}

// Standard 3GPP shape (6 x QPSK, 3 x 16QAM, 6 x 64QAM). The lowest rate is 1/13
// and the QPSK 1/3, 1/2, 2/3, 4/5 / 16QAM 1/2, 2/3, 4/5 / 64QAM 2/3, 4/5 formats
// are all present; the remaining rates fill the gaps roughly geometrically.
inline constexpr std::array<CqiEntry, kNumCqi> kCqiTable = {{
	make_cqi(1, 2, 1.0 / 13.0),
	make_cqi(2, 2, 0.16),
	make_cqi(3, 2, 1.0 / 3.0),
	make_cqi(4, 2, 1.0 / 2.0),
	make_cqi(5, 2, 2.0 / 3.0),
	make_cqi(6, 2, 4.0 / 5.0),
	make_cqi(7, 4, 1.0 / 2.0),
	make_cqi(8, 4, 2.0 / 3.0),
	make_cqi(9, 4, 4.0 / 5.0),
	make_cqi(10, 6, 0.6),
	make_cqi(11, 6, 2.0 / 3.0),
	make_cqi(12, 6, 0.73),
	make_cqi(13, 6, 4.0 / 5.0),
	make_cqi(14, 6, 0.865),
	make_cqi(15, 6, 0.925),
}};

} // namespace detail

/// The 15-entry CQI table, index 0 holds CQI 1.
inline const std::array<CqiEntry, kNumCqi>& cqi_table() { return detail::kCqiTable; }

/// Row for a CQI index in 1..15.
inline const CqiEntry& cqi_entry(int cqi_index)
{
	if (cqi_index < 1 || cqi_index > kNumCqi)
		throw std::out_of_range("cqi index " + std::to_string(cqi_index) + " outside 1..15");
	return detail::kCqiTable[static_cast<std::size_t>(cqi_index - 1)];
}

/// Data-carrying resource elements in one RB pair (one subframe) after overhead.
inline int data_symbols_per_rb_pair(const GridConfig& grid, double overhead_fraction = kDefaultOverhead)
{
	if (!(overhead_fraction >= 0.0 && overhead_fraction < 1.0))
		throw std::invalid_argument("overhead_fraction must lie in [0, 1)");
	const int raw = grid.subcarriers_per_rb * grid.symbols_per_slot * grid.slots_per_subframe;
	// The small epsilon keeps exact products like 168 * 0.75 from flooring down.
	return static_cast<int>(std::floor(raw * (1.0 - overhead_fraction) + 1e-9));
}

/// Transport block size in bits for a CQI over n_rb_allocated RB pairs.
inline std::int64_t tb_bits(const CqiEntry& cqi, int n_rb_allocated, const GridConfig& grid,
							double overhead_fraction = kDefaultOverhead)
{
	if (n_rb_allocated < 1 || n_rb_allocated > grid.n_rb)
		throw std::invalid_argument("tb_bits: allocation must be within 1..n_rb");
	const double bits = static_cast<double>(n_rb_allocated)
		* data_symbols_per_rb_pair(grid, overhead_fraction) * cqi.efficiency;
	return static_cast<std::int64_t>(std::floor(bits + 1e-9));
}

/// CSV export: cqi,modulation_bits,code_rate,efficiency
inline void write_cqi_table_csv(std::ostream& os)
{
	os << "cqi,modulation_bits,code_rate,efficiency\n";
	for (const auto& e : cqi_table())
		os << e.cqi_index << ',' << e.modulation_bits << ',' << detail::format_double(e.code_rate) << ','
		   << detail::format_double(e.efficiency) << '\n';
}

} // namespace dlsim

#endif // DLSIM_NUMEROLOGY_HPP
