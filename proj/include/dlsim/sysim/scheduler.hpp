#ifndef DLSIM_SYSIM_SCHEDULER_HPP
#define DLSIM_SYSIM_SCHEDULER_HPP

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "../numerology.hpp"
#include "feedback.hpp"

namespace dlsim::sysim {

enum class SchedulerId { rr, pf, bestcqi };

inline constexpr std::array<SchedulerId, 3> kSchedulers = {SchedulerId::pf, SchedulerId::rr, SchedulerId::bestcqi};

inline std::string to_string(SchedulerId id)
{
	switch (id) {
	case SchedulerId::rr: return "rr";
	case SchedulerId::pf: return "pf";
	case SchedulerId::bestcqi: return "bestcqi";
	}
	return "?";
}

inline SchedulerId parse_scheduler(std::string_view name)
{
	for (auto id : kSchedulers)
		if (name == to_string(id))
			return id;
	throw std::invalid_argument("unknown scheduler '" + std::string(name) + "' (expected one of: pf, rr, bestcqi)");
}

struct ScheduleDecision
{
	std::vector<int> rb_owner; ///< UE id per RB, -1 when unassigned
	std::vector<int> ue_cqi;   ///< MCS per UE, 0 when not scheduled

	ScheduleDecision(int n_rb, int n_ues)
		: rb_owner(static_cast<std::size_t>(n_rb), -1), ue_cqi(static_cast<std::size_t>(n_ues), 0)
	{
	}

	std::vector<int> assigned_rbs(int ue) const
	{
		std::vector<int> out;
		for (std::size_t rb = 0; rb < rb_owner.size(); ++rb)
			if (rb_owner[rb] == ue)
				out.push_back(static_cast<int>(rb));
		return out;
	}

	std::vector<int> rb_counts() const
	{
		std::vector<int> n(ue_cqi.size(), 0);
		for (int o : rb_owner)
			if (o >= 0)
				++n[static_cast<std::size_t>(o)];
		return n;
	}

	/// Owners are valid UE ids and every owner reported CQI >= 1 on its RB.
	/// Each RB holds one owner by construction, so double booking cannot occur.
	void validate(const CqiReports& reports) const
	{
		for (std::size_t rb = 0; rb < rb_owner.size(); ++rb) {
			const int o = rb_owner[rb];
			if (o < -1 || o >= static_cast<int>(ue_cqi.size()))
				throw std::logic_error("schedule: RB " + std::to_string(rb) + " has invalid owner");
			if (o >= 0 && reports[static_cast<std::size_t>(o)][rb] < 1)
				throw std::logic_error("schedule: RB " + std::to_string(rb) + " given to UE with CQI 0");
		}
	}
};

/// Cyclic assignment over the UE list. The pointer persists across
/// subframes; a UE reporting CQI 0 on an RB is skipped for that RB.
inline ScheduleDecision schedule_rr(const CqiReports& reports, int n_rb, int& pointer)
{
	const int n_ues = static_cast<int>(reports.size());
	ScheduleDecision d(n_rb, n_ues);
	for (int rb = 0; rb < n_rb; ++rb)
		for (int k = 0; k < n_ues; ++k) {
			const int ue = (pointer + k) % n_ues;
			if (reports[static_cast<std::size_t>(ue)][static_cast<std::size_t>(rb)] >= 1) {
				d.rb_owner[static_cast<std::size_t>(rb)] = ue;
				pointer = (ue + 1) % n_ues;
				break;
			}
		}
	return d;
}

/// Max C/I: each RB to the highest reported CQI, ties to the lowest UE id.
inline ScheduleDecision schedule_best_cqi(const CqiReports& reports, int n_rb)
{
	const int n_ues = static_cast<int>(reports.size());
	ScheduleDecision d(n_rb, n_ues);
	for (int rb = 0; rb < n_rb; ++rb) {
		int best = 0;
		for (int ue = 0; ue < n_ues; ++ue) {
			const int c = reports[static_cast<std::size_t>(ue)][static_cast<std::size_t>(rb)];
			if (c > best) {
				best = c;
				d.rb_owner[static_cast<std::size_t>(rb)] = ue;
			}
		}
	}
	return d;
}

/// Bits one RB carries at each CQI, index 0 = out of range.
inline std::array<double, kNumCqi + 1> rb_rates(const GridConfig& grid, double overhead)
{
	std::array<double, kNumCqi + 1> r{};
	for (int c = 1; c <= kNumCqi; ++c)
		r[static_cast<std::size_t>(c)] = static_cast<double>(tb_bits(cqi_entry(c), 1, grid, overhead));
	return r;
}

/// Per-RB proportional fair: argmax rate(rb) / avg, ties to the lowest UE id.
inline ScheduleDecision schedule_pf(const CqiReports& reports, int n_rb, const std::vector<double>& avg_throughput,
									const std::array<double, kNumCqi + 1>& rates)
{
	const int n_ues = static_cast<int>(reports.size());
	ScheduleDecision d(n_rb, n_ues);
	for (int rb = 0; rb < n_rb; ++rb) {
		double best = 0.0;
		for (int ue = 0; ue < n_ues; ++ue) {
			const double r = rates[static_cast<std::size_t>(reports[static_cast<std::size_t>(ue)][static_cast<std::size_t>(rb)])];
			if (r <= 0.0)
				continue;
			const double m = r / avg_throughput[static_cast<std::size_t>(ue)];
			if (m > best) {
				best = m;
				d.rb_owner[static_cast<std::size_t>(rb)] = ue;
			}
		}
	}
	return d;
}

/// Exponential smoothing of every UE's average, served in bits per TTI.
inline void pf_update(std::vector<double>& avg_throughput, const std::vector<double>& served, double time_constant)
{
	const double w = 1.0 / time_constant;
	for (std::size_t i = 0; i < avg_throughput.size(); ++i)
		avg_throughput[i] = (1.0 - w) * avg_throughput[i] + w * served[i];
}

} // namespace dlsim::sysim

#endif // DLSIM_SYSIM_SCHEDULER_HPP
