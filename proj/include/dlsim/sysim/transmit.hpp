#ifndef DLSIM_SYSIM_TRANSMIT_HPP
#define DLSIM_SYSIM_TRANSMIT_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "../cqi_map.hpp"
#include "../effective_sinr.hpp"
#include "../lut.hpp"
#include "../numerology.hpp"
#include "feedback.hpp"
#include "scheduler.hpp"

namespace dlsim::sysim {

/// One MCS per scheduled UE: the thresholds of its reported CQIs on the
/// assigned RBs stand in for their SINRs, are compressed through MIESM, and
/// the result is mapped back to a CQI. Falls back to the minimum reported CQI.
inline void assign_mcs(ScheduleDecision& d, const CqiReports& reports, const LutData& lut)
{
	const int n_ues = static_cast<int>(d.ue_cqi.size());
	std::vector<std::vector<double>> proxy(static_cast<std::size_t>(n_ues));
	std::vector<int> min_cqi(static_cast<std::size_t>(n_ues), kNumCqi);
	for (std::size_t rb = 0; rb < d.rb_owner.size(); ++rb) {
		const int o = d.rb_owner[rb];
		if (o < 0)
			continue;
		const int c = reports[static_cast<std::size_t>(o)][rb];
		proxy[static_cast<std::size_t>(o)].push_back(lut.map.threshold(c));
		min_cqi[static_cast<std::size_t>(o)] = std::min(min_cqi[static_cast<std::size_t>(o)], c);
	}
	for (int ue = 0; ue < n_ues; ++ue) {
		const auto& p = proxy[static_cast<std::size_t>(ue)];
		if (p.empty())
			continue;
		const int c = effective_cqi(p, lut);
		d.ue_cqi[static_cast<std::size_t>(ue)] = c >= 1 ? c : min_cqi[static_cast<std::size_t>(ue)];
	}
}

struct TbResult
{
	int ue = 0;
	int cqi_index = 0;
	int n_rb = 0;
	double effective_sinr_db = 0.0;
	double bler = 0.0;
	bool success = false;
	std::int64_t bits = 0;
};

/// Link performance model for one scheduled UE: MIESM over the true SINRs of
/// the assigned RBs, BLER read from the AWGN curve of the chosen MCS, and a
/// success draw. `uniform` lies in [0, 1); the block fails when uniform < BLER.
inline TbResult transmit_one(int ue, int cqi, std::span<const double> assigned_sinr_db, const LutData& lut,
							 const GridConfig& grid, double overhead, double uniform)
{
	TbResult r;
	r.ue = ue;
	r.cqi_index = cqi;
	r.n_rb = static_cast<int>(assigned_sinr_db.size());
	const auto& entry = cqi_entry(cqi);
	r.effective_sinr_db = miesm(assigned_sinr_db, lut.alpha(cqi), lut.mi.for_modulation(entry.modulation_bits));
	r.bler = interpolate_bler(lut.curve(cqi), r.effective_sinr_db);
	r.success = !(uniform < r.bler);
	r.bits = r.success ? tb_bits(entry, r.n_rb, grid, overhead) : 0;
	return r;
}

/// Applies transmit_one to every scheduled UE. `true_sinr_db(ue)` returns the
/// per-RB SINRs of the UE; uniforms holds one draw per UE.
template <typename SinrFn>
std::vector<TbResult> transmit(const ScheduleDecision& d, SinrFn&& true_sinr_db, const LutData& lut,
							   const GridConfig& grid, double overhead, std::span<const double> uniforms)
{
	std::vector<TbResult> out;
	std::vector<double> s;
	for (int ue = 0; ue < static_cast<int>(d.ue_cqi.size()); ++ue) {
		const int cqi = d.ue_cqi[static_cast<std::size_t>(ue)];
		if (cqi < 1)
			continue;
		const auto all = true_sinr_db(ue);
		s.clear();
		for (std::size_t rb = 0; rb < d.rb_owner.size(); ++rb)
			if (d.rb_owner[rb] == ue)
				s.push_back(all[rb]);
		if (s.empty())
			throw std::logic_error("transmit: UE " + std::to_string(ue) + " has an MCS but no RBs");
		out.push_back(transmit_one(ue, cqi, s, lut, grid, overhead, uniforms[static_cast<std::size_t>(ue)]));
	}
	return out;
}

} // namespace dlsim::sysim

#endif // DLSIM_SYSIM_TRANSMIT_HPP
