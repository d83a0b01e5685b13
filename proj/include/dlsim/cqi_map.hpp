#ifndef DLSIM_CQI_MAP_HPP
#define DLSIM_CQI_MAP_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "linksim.hpp"
#include "numerology.hpp"

namespace dlsim {

/// SNR (dB) at which each CQI reaches the target BLER; thresholds_db[i] is CQI i+1.
struct SnrCqiMap
{
	double target_bler = 0.1;
	std::vector<double> thresholds_db;

	double threshold(int cqi_index) const { return thresholds_db.at(static_cast<std::size_t>(cqi_index - 1)); }
	friend bool operator==(const SnrCqiMap&, const SnrCqiMap&) = default;
};

namespace detail {

// log10(BLER) against SNR; a zero sample falls back to linear interpolation.
inline double interpolate_log_bler(double s0, double b0, double s1, double b1, double s)
{
	const double f = (s - s0) / (s1 - s0);
	if (b0 <= 0.0 || b1 <= 0.0)
		return b0 + f * (b1 - b0);
	return std::pow(10.0, std::log10(b0) + f * (std::log10(b1) - std::log10(b0)));
}

} // namespace detail

/// BLER read from a measured curve at an arbitrary SNR: log-linear between
/// neighbouring samples, clamped to the end samples outside the measured range.
inline double interpolate_bler(const linksim::BlerCurve& curve, double snr_db)
{
	const auto& pts = curve.points;
	if (pts.empty())
		throw std::invalid_argument("interpolate_bler: empty curve for CQI " + std::to_string(curve.cqi_index));
	if (snr_db <= pts.front().snr_db)
		return pts.front().bler;
	if (snr_db >= pts.back().snr_db)
		return pts.back().bler;
	const auto it = std::upper_bound(pts.begin(), pts.end(), snr_db,
									 [](double s, const linksim::BlerPoint& p) { return s < p.snr_db; });
	const auto& hi = *it;
	const auto& lo = *(it - 1);
	return detail::interpolate_log_bler(lo.snr_db, lo.bler, hi.snr_db, hi.bler, snr_db);
}

/// SNR where the curve first falls from >= target to < target, interpolated
/// in log10(BLER). Empty when the curve never brackets the target.
inline std::optional<double> target_crossing(const linksim::BlerCurve& curve, double target_bler)
{
	const auto& pts = curve.points;
	for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
		const auto& a = pts[i];
		const auto& b = pts[i + 1];
		if (a.bler >= target_bler && b.bler < target_bler) {
			if (a.bler == target_bler)
				return a.snr_db;
			if (b.bler <= 0.0)
				return a.snr_db + (a.bler - target_bler) / (a.bler - b.bler) * (b.snr_db - a.snr_db);
			const double la = std::log10(a.bler), lb = std::log10(b.bler);
			return a.snr_db + (la - std::log10(target_bler)) / (la - lb) * (b.snr_db - a.snr_db);
		}
	}
	return std::nullopt;
}

/// One threshold per CQI 1..15 from the target-BLER crossing of each curve.
inline SnrCqiMap build_snr_cqi_map(const std::vector<linksim::BlerCurve>& curves, double target_bler = 0.1)
{
	if (!(target_bler > 0.0 && target_bler < 1.0))
		throw std::invalid_argument("build_snr_cqi_map: target BLER must lie in (0, 1)");
	SnrCqiMap map;
	map.target_bler = target_bler;
	for (int cqi = 1; cqi <= kNumCqi; ++cqi) {
		const auto it = std::find_if(curves.begin(), curves.end(), [&](const auto& c) { return c.cqi_index == cqi; });
		if (it == curves.end())
			throw std::invalid_argument("missing BLER curve for CQI " + std::to_string(cqi));
		const auto x = target_crossing(*it, target_bler);
		if (!x)
			throw std::invalid_argument("BLER curve for CQI " + std::to_string(cqi) + " never crosses target BLER "
										+ detail::format_double(target_bler));
		map.thresholds_db.push_back(*x);
	}
	for (std::size_t i = 1; i < map.thresholds_db.size(); ++i)
		if (!(map.thresholds_db[i] > map.thresholds_db[i - 1]))
			throw std::invalid_argument("SNR thresholds not strictly increasing at CQI " + std::to_string(i + 1));
	return map;
}

/// Largest CQI whose threshold is <= the SINR; 0 below the CQI 1 threshold.
inline int sinr_to_cqi(const SnrCqiMap& map, double effective_sinr_db)
{
	const auto it = std::upper_bound(map.thresholds_db.begin(), map.thresholds_db.end(), effective_sinr_db);
	return static_cast<int>(it - map.thresholds_db.begin());
}

} // namespace dlsim

#endif // DLSIM_CQI_MAP_HPP
