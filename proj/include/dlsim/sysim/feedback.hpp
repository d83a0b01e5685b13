#ifndef DLSIM_SYSIM_FEEDBACK_HPP
#define DLSIM_SYSIM_FEEDBACK_HPP

#include <algorithm>
#include <deque>
#include <span>
#include <stdexcept>
#include <vector>

#include "../effective_sinr.hpp"
#include "../lut.hpp"
#include "../numerology.hpp"

namespace dlsim::sysim {

/// Per-UE, per-RB CQI reports, [ue][rb]; 0 means out of range.
using CqiReports = std::vector<std::vector<int>>;

/// Highest CQI whose own MIESM compression of the SINRs reaches its threshold.
inline int effective_cqi(std::span<const double> sinr_db, const LutData& lut)
{
	for (int cqi = kNumCqi; cqi >= 1; --cqi) {
		const auto& table = lut.mi.for_modulation(cqi_entry(cqi).modulation_bits);
		if (miesm(sinr_db, lut.alpha(cqi), table) >= lut.map.threshold(cqi))
			return cqi;
	}
	return 0;
}

/// One CQI per subband of `subband_rbs` RBs (the last one may be shorter),
/// expanded to every RB of the subband.
inline std::vector<int> subband_report(std::span<const double> sinr_db, int subband_rbs, const LutData& lut)
{
	if (subband_rbs < 1)
		throw std::invalid_argument("subband_report: subband_rbs must be positive");
	std::vector<int> out(sinr_db.size(), 0);
	for (std::size_t start = 0; start < sinr_db.size(); start += static_cast<std::size_t>(subband_rbs)) {
		const auto len = std::min<std::size_t>(static_cast<std::size_t>(subband_rbs), sinr_db.size() - start);
		const int cqi = effective_cqi(sinr_db.subspan(start, len), lut);
		std::fill_n(out.begin() + static_cast<std::ptrdiff_t>(start), len, cqi);
	}
	return out;
}

/// Fixed-delay feedback channel. Reports pushed at subframe t come out at
/// t + delay; before the pipe has filled the eNB sees all-zero reports.
class FeedbackQueue
{
public:
	FeedbackQueue(int delay, int n_ues, int n_rb)
		: delay_(delay), empty_(static_cast<std::size_t>(n_ues), std::vector<int>(static_cast<std::size_t>(n_rb), 0))
	{
		if (delay < 0)
			throw std::invalid_argument("FeedbackQueue: delay must be non-negative");
		for (int i = 0; i < delay; ++i)
			pipe_.push_back(empty_);
	}

	int delay() const { return delay_; }
	std::size_t size() const { return pipe_.size(); }

	/// Enqueues this subframe's reports and returns the ones due now.
	CqiReports push(CqiReports current)
	{
		pipe_.push_back(std::move(current));
		CqiReports due = std::move(pipe_.front());
		pipe_.pop_front();
		return due;
	}

private:
	int delay_;
	CqiReports empty_;
	std::deque<CqiReports> pipe_;
};

} // namespace dlsim::sysim

#endif // DLSIM_SYSIM_FEEDBACK_HPP
