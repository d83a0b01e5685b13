#ifndef DLSIM_SYSIM_CHANNEL_HPP
#define DLSIM_SYSIM_CHANNEL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "config.hpp"

namespace dlsim::sysim {

struct Position
{
	double x = 0.0;
	double y = 0.0;

	friend bool operator==(const Position&, const Position&) = default;
};

inline double distance(const Position& a, const Position& b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Serving site at the origin plus one ring of interfering sites.
struct NetworkLayout
{
	Position center;
	double cell_radius_m = 250.0;
	double min_distance_m = 35.0;
	std::vector<Position> interferer_sites;
	double tx_power_dbm = 46.0;
	int n_ues = 20;

	static NetworkLayout from_config(const LayoutConfig& c)
	{
		NetworkLayout l;
		l.cell_radius_m = c.cell_radius_m;
		l.min_distance_m = c.min_distance_m;
		l.tx_power_dbm = c.tx_power_dbm;
		l.n_ues = c.n_ues;
		for (int k = 0; k < c.n_interferers; ++k) {
			const double a = 2.0 * std::numbers::pi * k / c.n_interferers + std::numbers::pi / 6.0;
			l.interferer_sites.push_back({c.inter_site_distance_m * std::cos(a), c.inter_site_distance_m * std::sin(a)});
		}
		return l;
	}

	/// Serving site first, then the interferers.
	std::vector<Position> sites() const
	{
		std::vector<Position> s{center};
		s.insert(s.end(), interferer_sites.begin(), interferer_sites.end());
		return s;
	}
};

/// Uniform positions over the annulus min_distance_m <= r <= cell_radius_m
/// around the serving site.
template <typename Rng>
std::vector<Position> deploy(const NetworkLayout& layout, Rng& rng)
{
	if (layout.n_ues < 1)
		throw std::invalid_argument("deploy: n_ues must be at least 1");
	std::uniform_real_distribution<double> u(0.0, 1.0);
	const double r0 = layout.min_distance_m * layout.min_distance_m;
	const double r1 = layout.cell_radius_m * layout.cell_radius_m;
	std::vector<Position> out;
	out.reserve(static_cast<std::size_t>(layout.n_ues));
	for (int i = 0; i < layout.n_ues; ++i) {
		const double r = std::sqrt(r0 + u(rng) * (r1 - r0));
		const double a = 2.0 * std::numbers::pi * u(rng);
		out.push_back({layout.center.x + r * std::cos(a), layout.center.y + r * std::sin(a)});
	}
	return out;
}

/// Distance-dependent loss in dB, intercept + slope * log10(d / 1 km).
inline double pathloss_db(double distance_m, const ChannelConfig& c)
{
	return c.pathloss_intercept_db + c.pathloss_slope_db * std::log10(std::max(distance_m, 1.0) / 1000.0);
}

/// Thermal noise over one RB in mW.
inline double noise_per_rb_mw(const ChannelConfig& c, const GridConfig& grid)
{
	return std::pow(10.0, (c.noise_density_dbm_hz + 10.0 * std::log10(grid.rb_bandwidth_hz()) + c.noise_figure_db) / 10.0);
}

/// Linear SINR of one RB: signal / (sum of interference + noise).
inline double per_rb_sinr(double signal_mw, std::span<const double> interference_mw, double noise_mw)
{
	double den = noise_mw;
	for (double i : interference_mw)
		den += i;
	return signal_mw / den;
}

/// Large-scale and fast-fading gains of every (UE, site) link. Gains include
/// the per-RB transmit power, so signal power = gain directly.
class Channel
{
public:
	template <typename Rng>
	Channel(const SimConfig& cfg, const std::vector<Position>& ues, Rng& shadow_rng)
		: cfg_(cfg)
		, n_ues_(static_cast<int>(ues.size()))
		, n_rb_(cfg.grid.n_rb)
		, noise_mw_(noise_per_rb_mw(cfg.channel, cfg.grid))
	{
		const auto layout = NetworkLayout::from_config(cfg.layout);
		const auto sites = layout.sites();
		n_sites_ = static_cast<int>(sites.size());
		const double tx_rb_dbm = layout.tx_power_dbm - 10.0 * std::log10(static_cast<double>(n_rb_));
		std::normal_distribution<double> shadow(0.0, 1.0);
		mean_gain_.resize(static_cast<std::size_t>(n_ues_ * n_sites_));
		for (int u = 0; u < n_ues_; ++u)
			for (int s = 0; s < n_sites_; ++s) {
				const double sh = cfg.channel.shadowing_std_db * shadow(shadow_rng);
				const double pl = pathloss_db(distance(ues[static_cast<std::size_t>(u)], sites[static_cast<std::size_t>(s)]),
											  cfg.channel);
				mean_gain_[idx(u, s)] = std::pow(10.0, (tx_rb_dbm - pl - sh) / 10.0);
			}
		if (cfg.layout.colocated)
			for (int u = 1; u < n_ues_; ++u)
				for (int s = 0; s < n_sites_; ++s)
					mean_gain_[idx(u, s)] = mean_gain_[idx(0, s)];
		fading_.assign(static_cast<std::size_t>(n_ues_ * n_sites_ * n_rb_), 1.0);
		sinr_db_.assign(static_cast<std::size_t>(n_ues_ * n_rb_), 0.0);
		update_sinr();
	}

	int n_ues() const { return n_ues_; }
	int n_rb() const { return n_rb_; }
	int n_sites() const { return n_sites_; }
	double noise_mw() const { return noise_mw_; }
	int coherence() const { return cfg_.channel.coherence(); }

	/// Average received power of a link over the fading, in mW per RB.
	double mean_gain(int ue, int site) const { return mean_gain_[idx(ue, site)]; }
	double gain(int ue, int site, int rb) const
	{
		return mean_gain_[idx(ue, site)] * fading_[idx(ue, site) * static_cast<std::size_t>(n_rb_) + static_cast<std::size_t>(rb)];
	}

	/// Redraws the Rayleigh power gains when `subframe` opens a new coherence block.
	/// Returns true if the channel changed.
	template <typename Rng>
	bool advance(int subframe, Rng& fading_rng)
	{
		if (!cfg_.channel.fading || subframe % coherence() != 0)
			return false;
		std::exponential_distribution<double> ray(1.0);
		const int drawn_ues = cfg_.layout.colocated ? 1 : n_ues_;
		const auto per_ue = static_cast<std::size_t>(n_sites_ * n_rb_);
		for (std::size_t i = 0; i < static_cast<std::size_t>(drawn_ues) * per_ue; ++i)
			fading_[i] = ray(fading_rng);
		for (int u = drawn_ues; u < n_ues_; ++u)
			std::copy_n(fading_.begin(), per_ue, fading_.begin() + static_cast<std::ptrdiff_t>(u * per_ue));
		update_sinr();
		return true;
	}

	double sinr_db(int ue, int rb) const { return sinr_db_[static_cast<std::size_t>(ue * n_rb_ + rb)]; }
	std::span<const double> sinr_db(int ue) const
	{
		return {sinr_db_.data() + static_cast<std::size_t>(ue * n_rb_), static_cast<std::size_t>(n_rb_)};
	}

private:
	std::size_t idx(int ue, int site) const { return static_cast<std::size_t>(ue * n_sites_ + site); }

	void update_sinr()
	{
		std::vector<double> interf(static_cast<std::size_t>(std::max(n_sites_ - 1, 0)));
		for (int u = 0; u < n_ues_; ++u)
			for (int rb = 0; rb < n_rb_; ++rb) {
				for (int s = 1; s < n_sites_; ++s)
					interf[static_cast<std::size_t>(s - 1)] = gain(u, s, rb);
				sinr_db_[static_cast<std::size_t>(u * n_rb_ + rb)]
					= 10.0 * std::log10(per_rb_sinr(gain(u, 0, rb), interf, noise_mw_));
			}
	}

	SimConfig cfg_;
	int n_ues_;
	int n_rb_;
	int n_sites_ = 1;
	double noise_mw_;
	std::vector<double> mean_gain_;
	std::vector<double> fading_; ///< [ue][site][rb]
	std::vector<double> sinr_db_; ///< [ue][rb]
};

} // namespace dlsim::sysim

#endif // DLSIM_SYSIM_CHANNEL_HPP
