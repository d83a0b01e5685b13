#ifndef DLSIM_MUTUAL_INFORMATION_HPP
#define DLSIM_MUTUAL_INFORMATION_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "modem.hpp"

namespace dlsim {

/// Nodes and weights for integrals of the form  int exp(-x^2) f(x) dx.
struct GaussHermite
{
	std::vector<double> nodes;
	std::vector<double> weights;
};

/// Newton iteration on the orthonormal Hermite recurrence.
inline GaussHermite gauss_hermite(int n)
{
	if (n < 2)
		throw std::invalid_argument("gauss_hermite: need at least two nodes");
	const double pim4 = 1.0 / std::pow(std::numbers::pi, 0.25);
	GaussHermite gh;
	gh.nodes.assign(static_cast<std::size_t>(n), 0.0);
	gh.weights.assign(static_cast<std::size_t>(n), 0.0);
	const int m = (n + 1) / 2;
	double z = 0.0;
	for (int i = 0; i < m; ++i) {
		if (i == 0)
			z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
		else if (i == 1)
			z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
		else if (i == 2)
			z = 1.86 * z - 0.86 * gh.nodes[0];
		else if (i == 3)
			z = 1.91 * z - 0.91 * gh.nodes[1];
		else
			z = 2.0 * z - gh.nodes[static_cast<std::size_t>(i - 2)];

		double pp = 0.0;
		for (int its = 0; its < 100; ++its) {
			double p1 = pim4, p2 = 0.0;
			for (int j = 1; j <= n; ++j) {
				const double p3 = p2;
				p2 = p1;
				p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt(static_cast<double>(j - 1) / j) * p3;
			}
			pp = std::sqrt(2.0 * n) * p2;
			const double z1 = z;
			z = z1 - p1 / pp;
			if (std::abs(z - z1) <= 1e-14)
				break;
		}
		gh.nodes[static_cast<std::size_t>(i)] = z;
		gh.nodes[static_cast<std::size_t>(n - 1 - i)] = -z;
		gh.weights[static_cast<std::size_t>(i)] = 2.0 / (pp * pp);
		gh.weights[static_cast<std::size_t>(n - 1 - i)] = 2.0 / (pp * pp);
	}
	return gh;
}

/// Uniform SNR sampling grid in dB.
struct SnrRange
{
	double lo_db = -30.0;
	double hi_db = 40.0;
	double step_db = 0.05;

	std::size_t count() const { return static_cast<std::size_t>(std::floor((hi_db - lo_db) / step_db + 1e-9)) + 1; }
};

/// BICM mutual information of one Gray-mapped constellation sampled on a
/// uniform SNR grid. Linear interpolation in (snr_db, mi), clamped outside.
struct MiTable
{
	int modulation_bits = 0;
	double lo_db = 0.0;
	double step_db = 0.0;
	std::vector<double> mi;

	std::size_t size() const { return mi.size(); }
	double snr_at(std::size_t i) const { return lo_db + static_cast<double>(i) * step_db; }
	double hi_db() const { return snr_at(mi.size() - 1); }

	friend bool operator==(const MiTable&, const MiTable&) = default;
};

namespace detail {

inline double log_sum_exp(const double* v, int n)
{
	double m = v[0];
	for (int i = 1; i < n; ++i)
		m = std::max(m, v[i]);
	double s = 0.0;
	for (int i = 0; i < n; ++i)
		s += std::exp(v[i] - m);
	return m + std::log(s);
}

} // namespace detail

/// BICM mutual information in bits per symbol at one SNR, by Gauss-Hermite
/// quadrature over the Gaussian noise of each axis.
inline double bicm_mutual_information(int modulation_bits, double snr_db, const GaussHermite& gh)
{
	const auto& c = linksim::constellation(modulation_bits);
	const int kb = c.bits_per_axis();
	const int nl = c.levels_per_axis();
	const double n0 = std::pow(10.0, -snr_db / 10.0);
	const double inv_n0 = 1.0 / n0;
	const double sq = std::sqrt(n0);
	const double norm = 1.0 / std::sqrt(std::numbers::pi);

	double loss = 0.0; // sum over axis bits of E[log2(all / same-bit)]
	double metric[8], same[8];
	for (int x = 0; x < nl; ++x) {
		for (std::size_t q = 0; q < gh.nodes.size(); ++q) {
			const double y = c.level(x) + sq * gh.nodes[q];
			for (int p = 0; p < nl; ++p) {
				const double e = y - c.level(p);
				metric[p] = -e * e * inv_n0;
			}
			const double all = detail::log_sum_exp(metric, nl);
			for (int j = 0; j < kb; ++j) {
				const int bit = (x >> (kb - 1 - j)) & 1;
				int cnt = 0;
				for (int p = 0; p < nl; ++p)
					if (((p >> (kb - 1 - j)) & 1) == bit)
						same[cnt++] = metric[p];
				loss += gh.weights[q] * norm * (all - detail::log_sum_exp(same, cnt));
			}
		}
	}
	loss /= (nl * std::numbers::ln2);
	// per-axis MI is kb - loss; both axes are identical
	return std::clamp(2.0 * (kb - loss), 0.0, static_cast<double>(modulation_bits));
}

/// Samples the MI curve. The first sample is pinned to 0 and everything from
/// the first saturated sample on is pinned to modulation_bits, which keeps
/// the interior strictly increasing and therefore invertible.
inline MiTable build_mi_table(int modulation_bits, const SnrRange& grid = {})
{
	if (modulation_bits != 2 && modulation_bits != 4 && modulation_bits != 6)
		throw std::invalid_argument("build_mi_table: unsupported modulation order "
									+ std::to_string(modulation_bits));
	if (grid.lo_db > -20.0 || grid.hi_db < 30.0 || !(grid.step_db > 0.0))
		throw std::invalid_argument("build_mi_table: grid must span at least [-20, 30] dB");
	static const GaussHermite gh = gauss_hermite(48);

	MiTable t;
	t.modulation_bits = modulation_bits;
	t.lo_db = grid.lo_db;
	t.step_db = grid.step_db;
	const auto n = grid.count();
	const double top = modulation_bits;
	t.mi.assign(n, top);
	t.mi[0] = 0.0;
	for (std::size_t i = 1; i + 1 < n; ++i) {
		const double v = bicm_mutual_information(modulation_bits, t.snr_at(i), gh);
		if (v >= top - 1e-10 || v <= t.mi[i - 1])
			break;
		t.mi[i] = v;
	}
	return t;
}

/// I(snr_db) by linear interpolation, clamped to the table ends.
inline double mi_at(const MiTable& t, double snr_db)
{
	if (t.mi.empty())
		throw std::invalid_argument("mi_at: empty table");
	const double pos = (snr_db - t.lo_db) / t.step_db;
	if (!(pos > 0.0))
		return t.mi.front();
	const auto last = t.mi.size() - 1;
	if (pos >= static_cast<double>(last))
		return t.mi.back();
	const auto i = static_cast<std::size_t>(pos);
	const double f = pos - static_cast<double>(i);
	return t.mi[i] + f * (t.mi[i + 1] - t.mi[i]);
}

/// Inverse of mi_at on the open interval (0, modulation_bits).
inline double mi_inverse(const MiTable& t, double mi)
{
	if (!(mi > 0.0 && mi < static_cast<double>(t.modulation_bits)))
		throw std::domain_error("mi_inverse: mutual information must lie strictly inside (0, "
								+ std::to_string(t.modulation_bits) + ")");
	const auto it = std::lower_bound(t.mi.begin(), t.mi.end(), mi);
	if (it == t.mi.end())
		throw std::domain_error("mi_inverse: value above table range");
	const auto i = static_cast<std::size_t>(it - t.mi.begin());
	if (i == 0)
		return t.lo_db;
	const double lo = t.mi[i - 1], hi = t.mi[i];
	const double f = (mi - lo) / (hi - lo);
	return t.snr_at(i - 1) + f * t.step_db;
}

/// Tables for QPSK, 16QAM and 64QAM on a common grid.
struct MiTableSet
{
	std::vector<MiTable> tables;

	static MiTableSet build(const SnrRange& grid = {})
	{
		MiTableSet s;
		for (int m : {2, 4, 6})
			s.tables.push_back(build_mi_table(m, grid));
		return s;
	}

	const MiTable& for_modulation(int modulation_bits) const
	{
		for (const auto& t : tables)
			if (t.modulation_bits == modulation_bits)
				return t;
		throw std::out_of_range("no MI table for " + std::to_string(modulation_bits) + " bits per symbol");
	}

	friend bool operator==(const MiTableSet&, const MiTableSet&) = default;
};

} // namespace dlsim

#endif // DLSIM_MUTUAL_INFORMATION_HPP
