#ifndef DLSIM_SYSIM_DROP_HPP
#define DLSIM_SYSIM_DROP_HPP

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "../lut.hpp"
#include "channel.hpp"
#include "config.hpp"
#include "feedback.hpp"
#include "scheduler.hpp"
#include "transmit.hpp"

namespace dlsim::sysim {

struct DropResult
{
	SchedulerId scheduler = SchedulerId::rr;
	std::uint64_t seed = 0;
	std::string config_digest;
	int n_subframes = 0;
	std::vector<double> throughput_bps;
	std::vector<std::int64_t> served_bits;
	std::vector<std::int64_t> rb_allocations; ///< RB-subframes given to each UE

	std::int64_t cell_bits() const
	{
		std::int64_t s = 0;
		for (auto b : served_bits)
			s += b;
		return s;
	}

	friend bool operator==(const DropResult&, const DropResult&) = default;
};

enum class Stream : std::uint32_t { deploy = 1, shadowing = 2, fading = 3, transmit = 4 };

/// Independent generator per (seed, purpose). Draws in one stream never shift
/// another, so a scheduler change leaves positions and channels untouched.
inline std::mt19937_64 stream_rng(std::uint64_t seed, Stream s)
{
	std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
					  static_cast<std::uint32_t>(s), 0x5157u};
	return std::mt19937_64(seq);
}

/// Full-buffer drop: deploy, then per subframe channel update, delayed CQI
/// feedback, scheduling, MCS selection, transmission and accounting.
inline DropResult run_drop(const SimConfig& cfg, const LutData& lut, SchedulerId scheduler, std::uint64_t seed)
{
	cfg.validate();
	if (lut.map.thresholds_db.size() != static_cast<std::size_t>(kNumCqi)
		|| lut.alphas.size() != static_cast<std::size_t>(kNumCqi))
		throw std::invalid_argument("run_drop: LUT must carry 15 thresholds and 15 alpha pairs");

	const int n_ues = cfg.layout.n_ues;
	const int n_rb = cfg.grid.n_rb;
	auto deploy_rng = stream_rng(seed, Stream::deploy);
	auto shadow_rng = stream_rng(seed, Stream::shadowing);
	auto fading_rng = stream_rng(seed, Stream::fading);
	auto tx_rng = stream_rng(seed, Stream::transmit);

	auto positions = deploy(NetworkLayout::from_config(cfg.layout), deploy_rng);
	if (cfg.layout.colocated)
		positions.assign(positions.size(), positions.front());
	Channel channel(cfg, positions, shadow_rng);
	FeedbackQueue queue(cfg.feedback_delay, n_ues, n_rb);

	const auto rates = rb_rates(cfg.grid, cfg.overhead);
	std::vector<double> avg(static_cast<std::size_t>(n_ues), rates[1]);
	int rr_pointer = 0;

	DropResult res;
	res.scheduler = scheduler;
	res.seed = seed;
	res.config_digest = config_digest(cfg);
	res.n_subframes = cfg.n_subframes;
	res.served_bits.assign(static_cast<std::size_t>(n_ues), 0);
	res.rb_allocations.assign(static_cast<std::size_t>(n_ues), 0);

	std::uniform_real_distribution<double> unif(0.0, 1.0);
	std::vector<double> draws(static_cast<std::size_t>(n_ues));
	std::vector<double> served(static_cast<std::size_t>(n_ues));
	CqiReports current(static_cast<std::size_t>(n_ues));

	for (int t = 0; t < cfg.n_subframes; ++t) {
		if (channel.advance(t, fading_rng) || t == 0)
			for (int ue = 0; ue < n_ues; ++ue)
				current[static_cast<std::size_t>(ue)] = subband_report(channel.sinr_db(ue), cfg.subband_rbs, lut);
		const auto reports = queue.push(current);

		ScheduleDecision d(n_rb, n_ues);
		switch (scheduler) {
		case SchedulerId::rr: d = schedule_rr(reports, n_rb, rr_pointer); break;
		case SchedulerId::bestcqi: d = schedule_best_cqi(reports, n_rb); break;
		case SchedulerId::pf: d = schedule_pf(reports, n_rb, avg, rates); break;
		}
		d.validate(reports);
		assign_mcs(d, reports, lut);

		for (auto& u : draws)
			u = unif(tx_rng);
		const auto tbs = transmit(
			d, [&](int ue) { return channel.sinr_db(ue); }, lut, cfg.grid, cfg.overhead, draws);

		std::fill(served.begin(), served.end(), 0.0);
		std::int64_t cell = 0;
		for (const auto& tb : tbs) {
			served[static_cast<std::size_t>(tb.ue)] = static_cast<double>(tb.bits);
			res.served_bits[static_cast<std::size_t>(tb.ue)] += tb.bits;
			cell += tb.bits;
		}
		const auto counts = d.rb_counts();
		for (int ue = 0; ue < n_ues; ++ue)
			res.rb_allocations[static_cast<std::size_t>(ue)] += counts[static_cast<std::size_t>(ue)];
		double check = 0.0;
		for (double s : served)
			check += s;
		if (check != static_cast<double>(cell))
			throw std::logic_error("run_drop: served bits do not add up to the cell total");
		pf_update(avg, served, cfg.pf_time_constant);
	}

	const double duration_s = cfg.n_subframes * cfg.grid.subframe_duration_s;
	for (auto b : res.served_bits)
		res.throughput_bps.push_back(static_cast<double>(b) / duration_s);
	return res;
}

} // namespace dlsim::sysim

#endif // DLSIM_SYSIM_DROP_HPP
