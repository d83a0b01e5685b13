#ifndef DLSIM_EFFECTIVE_SINR_HPP
#define DLSIM_EFFECTIVE_SINR_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>

#include "mutual_information.hpp"

namespace dlsim {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// Per-CQI calibration pair of the MI mapping.
struct MiesmParams
{
	double alpha1 = 1.0;
	double alpha2 = 1.0;

	void validate() const
	{
		if (!(alpha1 > 0.0 && alpha2 > 0.0))
			throw std::invalid_argument("MiesmParams: alphas must be strictly positive");
	}
	friend bool operator==(const MiesmParams&, const MiesmParams&) = default;
};

namespace detail {

inline bool all_equal(std::span<const double> v)
{
	return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

} // namespace detail

/// Mutual-information effective SINR:
///   alpha1 * I^-1( mean_p I(sinr_p / alpha2) )
/// with the alpha scaling in linear power and I read from the table in dB.
/// Inputs and result in dB.
inline double miesm(std::span<const double> per_rb_sinr_db, const MiesmParams& params, const MiTable& table)
{
	if (per_rb_sinr_db.empty())
		throw std::invalid_argument("miesm: empty SINR sequence");
	params.validate();
	const double a1_db = linear_to_db(params.alpha1);
	const double a2_db = linear_to_db(params.alpha2);
	if (detail::all_equal(per_rb_sinr_db) && params.alpha1 == params.alpha2)
		return per_rb_sinr_db.front();

	double sum = 0.0;
	for (double s : per_rb_sinr_db)
		sum += mi_at(table, s - a2_db);
	const double avg = sum / static_cast<double>(per_rb_sinr_db.size());

	// Outside the table's invertible range every input sits on the same clamped
	// end; fall back to the input nearest that end.
	const auto [lo_it, hi_it] = std::minmax_element(per_rb_sinr_db.begin(), per_rb_sinr_db.end());
	if (avg <= 0.0)
		return *hi_it - a2_db + a1_db;
	if (avg >= static_cast<double>(table.modulation_bits))
		return *lo_it - a2_db + a1_db;
	return a1_db + mi_inverse(table, avg);
}

/// Exponential effective SINR:  -beta * ln( mean_p exp(-sinr_p / beta) ),
/// linear power inside, dB in and out.
inline double eesm(std::span<const double> per_rb_sinr_db, double beta)
{
	if (per_rb_sinr_db.empty())
		throw std::invalid_argument("eesm: empty SINR sequence");
	if (!(beta > 0.0))
		throw std::invalid_argument("eesm: beta must be positive");
	if (detail::all_equal(per_rb_sinr_db))
		return per_rb_sinr_db.front();

	double gmin = db_to_linear(*std::min_element(per_rb_sinr_db.begin(), per_rb_sinr_db.end()));
	// log-sum-exp anchored at the weakest RB
	double s = 0.0;
	for (double x : per_rb_sinr_db)
		s += std::exp(-(db_to_linear(x) - gmin) / beta);
	const double eff = gmin - beta * std::log(s / static_cast<double>(per_rb_sinr_db.size()));
	return linear_to_db(eff);
}

} // namespace dlsim

#endif // DLSIM_EFFECTIVE_SINR_HPP
