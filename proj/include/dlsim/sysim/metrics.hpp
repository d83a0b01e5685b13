#ifndef DLSIM_SYSIM_METRICS_HPP
#define DLSIM_SYSIM_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "../detail/text.hpp"
#include "drop.hpp"

namespace dlsim::sysim {

struct CdfPoint
{
	double throughput_bps = 0.0;
	double cdf = 0.0;

	friend bool operator==(const CdfPoint&, const CdfPoint&) = default;
};

/// Empirical CDF, one point per distinct value, P(X <= x).
inline std::vector<CdfPoint> throughput_cdf(std::vector<double> samples)
{
	if (samples.empty())
		throw std::invalid_argument("throughput_cdf: no UE results");
	std::sort(samples.begin(), samples.end());
	const double n = static_cast<double>(samples.size());
	std::vector<CdfPoint> out;
	for (std::size_t i = 0; i < samples.size(); ++i) {
		if (i + 1 < samples.size() && samples[i + 1] == samples[i])
			continue;
		out.push_back({samples[i], static_cast<double>(i + 1) / n});
	}
	return out;
}

/// Nearest-rank percentile, p in (0, 100].
inline double percentile(std::vector<double> samples, double p)
{
	if (samples.empty())
		throw std::invalid_argument("percentile: no samples");
	if (!(p > 0.0 && p <= 100.0))
		throw std::invalid_argument("percentile: p must lie in (0, 100]");
	std::sort(samples.begin(), samples.end());
	const auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(samples.size()) - 1e-9));
	return samples[std::max<std::size_t>(rank, 1) - 1];
}

/// (sum x)^2 / (n sum x^2); 1 for an all-zero set.
inline double jain_index(const std::vector<double>& x)
{
	if (x.empty())
		throw std::invalid_argument("jain_index: no samples");
	double s = 0.0, s2 = 0.0;
	for (double v : x) {
		s += v;
		s2 += v * v;
	}
	if (s2 == 0.0)
		return 1.0;
	return s * s / (static_cast<double>(x.size()) * s2);
}

inline std::vector<double> pooled_throughputs(const std::vector<DropResult>& drops)
{
	std::vector<double> out;
	for (const auto& d : drops)
		out.insert(out.end(), d.throughput_bps.begin(), d.throughput_bps.end());
	return out;
}

inline constexpr double kSummaryPercentiles[] = {50.0, 95.0, 100.0};

inline void write_throughput_csv(std::ostream& os, const std::vector<DropResult>& drops)
{
	os << "drop,ue,throughput_bps\n";
	for (std::size_t k = 0; k < drops.size(); ++k)
		for (std::size_t u = 0; u < drops[k].throughput_bps.size(); ++u)
			os << k << ',' << u << ',' << detail::format_double(drops[k].throughput_bps[u]) << '\n';
}

inline void write_cdf_csv(std::ostream& os, const std::vector<CdfPoint>& cdf)
{
	os << "throughput_bps,cdf\n";
	for (const auto& p : cdf)
		os << detail::format_double(p.throughput_bps) << ',' << detail::format_double(p.cdf) << '\n';
}

inline void write_summary_csv(std::ostream& os, const std::string& scheduler, const std::vector<double>& samples)
{
	os << "scheduler,percentile,throughput_bps\n";
	for (double p : kSummaryPercentiles)
		os << scheduler << ',' << detail::format_double(p) << ',' << detail::format_double(percentile(samples, p))
		   << '\n';
}

/// Reads throughput_bps from a drop,ue,throughput_bps file.
inline std::vector<double> read_throughput_csv(std::istream& is)
{
	std::string line;
	if (!std::getline(is, line) || detail::trim(line) != "drop,ue,throughput_bps")
		throw std::runtime_error("throughput CSV: missing header drop,ue,throughput_bps");
	std::vector<double> out;
	while (std::getline(is, line)) {
		if (detail::trim(line).empty())
			continue;
		const auto f = detail::split(line, ',');
		if (f.size() != 3)
			throw std::runtime_error("throughput CSV: expected 3 fields in '" + line + "'");
		out.push_back(detail::parse_double(f[2]));
	}
	return out;
}

} // namespace dlsim::sysim

#endif // DLSIM_SYSIM_METRICS_HPP
