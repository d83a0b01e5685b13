#ifndef DLSIM_SYSIM_CONFIG_HPP
#define DLSIM_SYSIM_CONFIG_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "../detail/text.hpp"
#include "../numerology.hpp"

namespace dlsim::sysim {

struct LayoutConfig
{
	double inter_site_distance_m = 500.0;
	double cell_radius_m = 250.0;
	double min_distance_m = 35.0;
	int n_interferers = 6;
	double tx_power_dbm = 46.0;
	int n_ues = 20;
	bool colocated = false; ///< every UE shares one position and one channel
};

struct ChannelConfig
{
	double pathloss_intercept_db = 128.1; ///< at 1 km
	double pathloss_slope_db = 37.6;	  ///< per decade of distance
	double shadowing_std_db = 8.0;
	bool fading = true;
	double speed_kmh = 5.0;
	double carrier_ghz = 2.0;
	int coherence_subframes = 0; ///< 0: derived from speed and carrier
	double noise_figure_db = 9.0;
	double noise_density_dbm_hz = -174.0;

	/// Block length of the fading process in subframes, 0.423 / f_doppler.
	int coherence() const
	{
		if (coherence_subframes > 0)
			return coherence_subframes;
		if (!(speed_kmh > 0.0))
			return 1 << 30;
		const double fd = speed_kmh / 3.6 * carrier_ghz * 1e9 / 299792458.0;
		return std::max(1, static_cast<int>(std::floor(0.423 / fd * 1e3)));
	}
};

struct SimConfig
{
	LayoutConfig layout;
	ChannelConfig channel;
	GridConfig grid;
	double overhead = kDefaultOverhead;
	int subband_rbs = 6;
	int feedback_delay = 3;
	int n_subframes = 2000;
	double pf_time_constant = 1000.0;
	std::uint64_t seed = 1;
	int n_drops = 1;

	void validate() const
	{
		grid.validate();
		if (layout.n_ues < 1)
			throw std::invalid_argument("config: n_ues must be at least 1");
		if (!(layout.cell_radius_m > layout.min_distance_m && layout.min_distance_m >= 0.0))
			throw std::invalid_argument("config: need 0 <= min_distance_m < cell_radius_m");
		if (layout.n_interferers < 0)
			throw std::invalid_argument("config: n_interferers must be non-negative");
		if (!(layout.inter_site_distance_m > 0.0))
			throw std::invalid_argument("config: inter_site_distance_m must be positive");
		if (channel.shadowing_std_db < 0.0 || channel.coherence_subframes < 0)
			throw std::invalid_argument("config: invalid channel parameters");
		if (subband_rbs < 1 || subband_rbs > grid.n_rb)
			throw std::invalid_argument("config: subband_rbs must be within 1..n_rb");
		if (feedback_delay < 0)
			throw std::invalid_argument("config: feedback_delay must be non-negative");
		if (n_subframes < 1)
			throw std::invalid_argument("config: n_subframes must be at least 1");
		if (!(pf_time_constant >= 1.0))
			throw std::invalid_argument("config: pf_time_constant must be >= 1");
		if (n_drops < 1)
			throw std::invalid_argument("config: n_drops must be at least 1");
	}
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(LayoutConfig, inter_site_distance_m, cell_radius_m, min_distance_m,
												n_interferers, tx_power_dbm, n_ues, colocated)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ChannelConfig, pathloss_intercept_db, pathloss_slope_db,
												shadowing_std_db, fading, speed_kmh, carrier_ghz,
												coherence_subframes, noise_figure_db, noise_density_dbm_hz)

inline void to_json(nlohmann::json& j, const SimConfig& c)
{
	j = nlohmann::json{{"layout", c.layout},
					   {"channel", c.channel},
					   {"n_rb", c.grid.n_rb},
					   {"bandwidth_hz", c.grid.bandwidth_hz},
					   {"overhead", c.overhead},
					   {"subband_rbs", c.subband_rbs},
					   {"feedback_delay", c.feedback_delay},
					   {"n_subframes", c.n_subframes},
					   {"pf_time_constant", c.pf_time_constant},
					   {"seed", c.seed},
					   {"n_drops", c.n_drops}};
}

inline void from_json(const nlohmann::json& j, SimConfig& c)
{
	static const char* known[] = {"layout",	   "channel",		 "n_rb",			 "bandwidth_hz",
								  "overhead",  "subband_rbs",	 "feedback_delay", "n_subframes",
								  "pf_time_constant", "seed", "n_drops"};
	for (const auto& [key, _] : j.items())
		if (std::find(std::begin(known), std::end(known), key) == std::end(known))
			throw std::invalid_argument("config: unknown key '" + key + "'");
	const SimConfig d;
	c.layout = j.value("layout", d.layout);
	c.channel = j.value("channel", d.channel);
	c.grid.n_rb = j.value("n_rb", d.grid.n_rb);
	c.grid.bandwidth_hz = j.value("bandwidth_hz", d.grid.bandwidth_hz);
	c.overhead = j.value("overhead", d.overhead);
	c.subband_rbs = j.value("subband_rbs", d.subband_rbs);
	c.feedback_delay = j.value("feedback_delay", d.feedback_delay);
	c.n_subframes = j.value("n_subframes", d.n_subframes);
	c.pf_time_constant = j.value("pf_time_constant", d.pf_time_constant);
	c.seed = j.value("seed", d.seed);
	c.n_drops = j.value("n_drops", d.n_drops);
}

/// Canonical JSON text; keys sorted, so equal configs give equal strings.
inline std::string canonical_json(const SimConfig& c) { return nlohmann::json(c).dump(); }

inline std::string config_digest(const SimConfig& c) { return detail::hex64(detail::fnv1a(canonical_json(c))); }

inline SimConfig parse_config(const std::string& text)
{
	SimConfig c;
	try {
		c = nlohmann::json::parse(text, nullptr, true, true).get<SimConfig>();
	} catch (const nlohmann::json::exception& e) {
		throw std::invalid_argument(std::string("config: ") + e.what());
	}
	c.validate();
	return c;
}

inline SimConfig load_config(const std::string& path)
{
	std::ifstream is(path);
	if (!is)
		throw std::runtime_error("cannot open config: " + path);
	std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
	return parse_config(text);
}

} // namespace dlsim::sysim

#endif // DLSIM_SYSIM_CONFIG_HPP
