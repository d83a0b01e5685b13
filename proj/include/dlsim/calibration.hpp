#ifndef DLSIM_CALIBRATION_HPP
#define DLSIM_CALIBRATION_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cqi_map.hpp"
#include "effective_sinr.hpp"
#include "linksim.hpp"
#include "mutual_information.hpp"
#include "numerology.hpp"

namespace dlsim {

/// One per-RB SINR realization with the BLER measured for it.
struct FadingSample
{
	std::vector<double> per_rb_sinr_db;
	double measured_bler = 0.0;
};

/// Candidate alphas: 2^(k / steps_per_octave) for |k| <= octaves * steps_per_octave.
/// The grid always contains 1.
struct AlphaGrid
{
	int octaves = 2;
	int steps_per_octave = 8;

	std::vector<double> values() const
	{
		std::vector<double> v;
		const int n = octaves * steps_per_octave;
		for (int k = -n; k <= n; ++k)
			v.push_back(std::exp2(static_cast<double>(k) / steps_per_octave));
		return v;
	}
};

/// Squared BLER prediction error of (alpha1, alpha2) over a sample set.
inline double alpha_fit_error(const MiesmParams& params, const linksim::BlerCurve& reference, const MiTable& table,
							  const std::vector<FadingSample>& samples)
{
	double err = 0.0;
	for (const auto& s : samples) {
		const double pred = interpolate_bler(reference, miesm(s.per_rb_sinr_db, params, table));
		err += (pred - s.measured_bler) * (pred - s.measured_bler);
	}
	return err;
}

/// Exhaustive search over the alpha grid. Near-ties (equal error up to
/// rounding) resolve to the pair closest to (1, 1) in log scale, so a flat
/// AWGN sample set, for which every alpha1 == alpha2 fits exactly, gives (1, 1).
inline MiesmParams calibrate_alpha(const linksim::BlerCurve& reference, const MiTable& table,
								   const std::vector<FadingSample>& samples, const AlphaGrid& grid = {})
{
	const auto values = grid.values();
	MiesmParams best;
	double best_err = std::numeric_limits<double>::infinity();
	double best_dist = std::numeric_limits<double>::infinity();
	for (double a1 : values)
		for (double a2 : values) {
			const MiesmParams p{a1, a2};
			const double e = alpha_fit_error(p, reference, table, samples);
			const double dist = std::abs(std::log2(a1)) + std::abs(std::log2(a2));
			const double tol = 1e-12 + 1e-9 * std::min(e, best_err);
			if (e < best_err - tol || (std::abs(e - best_err) <= tol && dist < best_dist)) {
				best = p;
				best_err = e;
				best_dist = dist;
			}
		}
	return best;
}

/// Fits one alpha pair per CQI. Every CQI with samples needs a reference curve.
inline std::map<int, MiesmParams> calibrate_alphas(const std::vector<linksim::BlerCurve>& reference_curves,
												   const std::map<int, std::vector<FadingSample>>& fading_samples,
												   const MiTableSet& tables, const AlphaGrid& grid = {})
{
	std::map<int, MiesmParams> out;
	for (const auto& [cqi, samples] : fading_samples) {
		const auto it = std::find_if(reference_curves.begin(), reference_curves.end(),
									 [&](const auto& c) { return c.cqi_index == cqi; });
		if (it == reference_curves.end())
			throw std::invalid_argument("calibrate_alphas: no reference curve for CQI " + std::to_string(cqi));
		out[cqi] = calibrate_alpha(*it, tables.for_modulation(cqi_entry(cqi).modulation_bits), samples, grid);
	}
	return out;
}

} // namespace dlsim

#endif // DLSIM_CALIBRATION_HPP
