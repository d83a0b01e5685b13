#ifndef DLSIM_TESTS_SUPPORT_HPP
#define DLSIM_TESTS_SUPPORT_HPP

#include <cmath>
#include <vector>

#include <dlsim/lut.hpp>
#include <dlsim/numerology.hpp>

namespace dlsim::test {

/// Threshold of CQI c in the synthetic curves: -6 dB at CQI 1, 2 dB apart.
inline double synthetic_threshold(int cqi) { return -6.0 + 2.0 * (cqi - 1); }

/// Curves falling one decade per dB, BLER = 0.1 exactly at the threshold,
/// ending with one zero sample.
inline std::vector<linksim::BlerCurve> synthetic_curves()
{
	std::vector<linksim::BlerCurve> out;
	for (int c = 1; c <= kNumCqi; ++c) {
		linksim::BlerCurve curve;
		curve.cqi_index = c;
		for (int i = 0;; ++i) {
			const double s = -12.0 + 0.5 * i;
			double b = std::min(1.0, std::pow(10.0, -(s - synthetic_threshold(c) + 1.0)));
			const bool last = b < 1e-4;
			if (last)
				b = 0.0;
			curve.points.push_back({s, b, 1000, static_cast<std::int64_t>(std::llround(b * 1000))});
			if (last)
				break;
		}
		out.push_back(curve);
	}
	return out;
}

/// LUT with the synthetic curves, exact thresholds and unit alphas.
inline const LutData& synthetic_lut()
{
	static const LutData lut = [] {
		LutData d;
		d.curves = synthetic_curves();
		d.map = build_snr_cqi_map(d.curves, 0.1);
		d.mi = MiTableSet::build();
		d.alphas.assign(kNumCqi, MiesmParams{});
		d.seed = 42;
		return d;
	}();
	return lut;
}

} // namespace dlsim::test

#endif // DLSIM_TESTS_SUPPORT_HPP
