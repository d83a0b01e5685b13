// dlsim: bler -> map-cqi -> simulate -> cdf

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <dlsim/dlsim.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& p)
{
	std::ifstream is(p, std::ios::binary);
	if (!is)
		throw std::runtime_error("cannot open " + p.string());
	return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

std::string file_digest(const fs::path& p) { return dlsim::detail::hex64(dlsim::detail::fnv1a(read_file(p))); }

void write_file(const fs::path& p, const std::string& text)
{
	if (p.has_parent_path())
		fs::create_directories(p.parent_path());
	std::ofstream os(p, std::ios::binary);
	if (!os || !(os << text) || !os.flush())
		throw std::runtime_error("cannot write " + p.string());
}

// SOURCE_DATE_EPOCH pins the timestamp for reproducible manifests.
std::string timestamp()
{
	std::time_t t = std::time(nullptr);
	if (const char* s = std::getenv("SOURCE_DATE_EPOCH"))
		t = static_cast<std::time_t>(std::stoll(s));
	std::tm tm{};
	gmtime_r(&t, &tm);
	char buf[32];
	std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
	return buf;
}

/// One manifest per output directory; each command records itself under
/// its own key and leaves entries of other commands alone.
void record_manifest(const fs::path& dir, const std::string& key, json entry)
{
	const auto path = dir / "manifest.json";
	json m = json::object();
	if (fs::exists(path)) {
		try {
			m = json::parse(read_file(path));
		} catch (const json::exception&) {
			m = json::object();
		}
	}
	m["tool"] = "dlsim";
	m["version"] = dlsim::kVersion;
	entry["timestamp"] = timestamp();
	m["runs"][key] = std::move(entry);
	write_file(path, m.dump(2) + "\n");
}

fs::path dir_of(const fs::path& file) { return file.has_parent_path() ? file.parent_path() : fs::path("."); }

/// Relative config paths that do not exist are looked up in DLSIM_CONFIG_PATH
/// (colon separated directories).
fs::path resolve_config(const std::string& name)
{
	fs::path p(name);
	if (fs::exists(p) || p.is_absolute())
		return p;
	if (const char* env = std::getenv("DLSIM_CONFIG_PATH")) {
		for (auto dir : dlsim::detail::split(env, ':')) {
			if (dir.empty())
				continue;
			const auto cand = fs::path(std::string(dir)) / p;
			if (fs::exists(cand))
				return cand;
		}
	}
	throw std::runtime_error("config not found: " + name + " (also searched DLSIM_CONFIG_PATH)");
}

std::vector<int> parse_cqi_list(const std::string& s)
{
	std::vector<int> out;
	if (s == "all") {
		for (int c = 1; c <= dlsim::kNumCqi; ++c)
			out.push_back(c);
		return out;
	}
	for (auto f : dlsim::detail::split(s, ',')) {
		int c = 0;
		try {
			c = dlsim::detail::parse_int<int>(f);
		} catch (const std::exception&) {
			throw CLI::ValidationError("--cqi", "expected 'all' or CQI indices 1..15, got '" + s + "'");
		}
		if (c < 1 || c > dlsim::kNumCqi)
			throw CLI::ValidationError("--cqi", "CQI index " + std::to_string(c) + " outside 1..15");
		if (std::find(out.begin(), out.end(), c) == out.end())
			out.push_back(c);
	}
	std::sort(out.begin(), out.end());
	return out;
}

struct BlerArgs
{
	std::string cqi = "all";
	std::uint64_t seed = 1;
	std::string out = "curves.csv";
	double snr_lo = -10.0, snr_hi = 22.0, snr_step = 0.5;
	std::int64_t min_blocks = 100, min_errors = 50, max_blocks = 20000;
	int clean_points = 2;
	int threads = 0;
};

int cmd_bler(const BlerArgs& a)
{
	const auto cqis = parse_cqi_list(a.cqi);
	dlsim::linksim::LinkSimConfig cfg;
	cfg.snr_grid_db = dlsim::linksim::snr_grid(a.snr_lo, a.snr_hi, a.snr_step);
	cfg.min_blocks = a.min_blocks;
	cfg.min_block_errors = a.min_errors;
	cfg.max_blocks = a.max_blocks;
	cfg.clean_points_to_stop = a.clean_points;
	cfg.rng_seed = a.seed;
	cfg.threads = a.threads;
	const auto curves = dlsim::linksim::run_bler_all(cqis, cfg);
	std::ostringstream os;
	dlsim::linksim::write_curves_csv(os, curves);
	const fs::path out(a.out);
	write_file(out, os.str());

	json params = {{"cqi", cqis},
				   {"snr_lo_db", a.snr_lo},
				   {"snr_hi_db", a.snr_hi},
				   {"snr_step_db", a.snr_step},
				   {"min_blocks", a.min_blocks},
				   {"min_errors", a.min_errors},
				   {"max_blocks", a.max_blocks},
				   {"clean_points_to_stop", a.clean_points},
				   {"block_length", cfg.turbo.block_length_k},
				   {"iterations", cfg.turbo.n_iterations}};
	record_manifest(dir_of(out), "bler:" + out.filename().string(),
					{{"command", "bler"},
					 {"seeds", json::array({a.seed})},
					 {"parameters", params},
					 {"config_digest", dlsim::detail::hex64(dlsim::detail::fnv1a(params.dump()))},
					 {"inputs", json::array()},
					 {"outputs", {{{"path", out.filename().string()}, {"digest", file_digest(out)}}}}});
	return 0;
}

struct MapArgs
{
	std::string curves;
	double target = 0.1;
	std::string out = "lut.txt";
	std::uint64_t seed = 1;
};

int cmd_map_cqi(const MapArgs& a)
{
	const fs::path in(a.curves);
	const auto text = read_file(in);
	std::istringstream is(text);
	dlsim::LutData lut;
	lut.curves = dlsim::linksim::read_curves_csv(is);
	lut.map = dlsim::build_snr_cqi_map(lut.curves, a.target);
	lut.mi = dlsim::MiTableSet::build();
	lut.alphas.assign(dlsim::kNumCqi, dlsim::MiesmParams{});
	lut.seed = a.seed;
	const json params = {{"curves_digest", dlsim::detail::hex64(dlsim::detail::fnv1a(text))},
						 {"target_bler", a.target}};
	lut.config_digest = dlsim::detail::hex64(dlsim::detail::fnv1a(params.dump()));
	const fs::path out(a.out);
	std::ostringstream os;
	dlsim::lut_save(lut, os);
	write_file(out, os.str());
	record_manifest(dir_of(out), "map-cqi:" + out.filename().string(),
					{{"command", "map-cqi"},
					 {"seeds", json::array({a.seed})},
					 {"parameters", params},
					 {"config_digest", lut.config_digest},
					 {"inputs", {{{"path", fs::absolute(in).lexically_normal().string()}, {"digest", file_digest(in)}}}},
					 {"outputs", {{{"path", out.filename().string()}, {"digest", file_digest(out)}}}}});
	return 0;
}

struct SimArgs
{
	std::string config;
	std::string scheduler;
	std::string lut;
	std::string out = "results";
	std::optional<std::uint64_t> seed;
	std::optional<int> drops;
	std::optional<int> subframes;
	int threads = 0;
};

dlsim::LutData load_lut_checked(const fs::path& p)
{
	auto res = dlsim::lut_load(p.string());
	for (const auto& w : res.warnings)
		std::cerr << "warning: " << w << '\n';
	return std::move(res.data);
}

std::string summary_text(const std::string& name, const std::vector<double>& tp)
{
	std::ostringstream os;
	dlsim::sysim::write_summary_csv(os, name, tp);
	return os.str();
}

std::string cdf_text(const std::vector<double>& tp)
{
	std::ostringstream os;
	dlsim::sysim::write_cdf_csv(os, dlsim::sysim::throughput_cdf(tp));
	return os.str();
}

int cmd_simulate(const SimArgs& a)
{
	using namespace dlsim::sysim;
	const auto sched = parse_scheduler(a.scheduler);
	SimConfig cfg;
	fs::path cfg_path;
	if (!a.config.empty()) {
		cfg_path = resolve_config(a.config);
		cfg = load_config(cfg_path.string());
	}
	if (a.seed)
		cfg.seed = *a.seed;
	if (a.drops)
		cfg.n_drops = *a.drops;
	if (a.subframes)
		cfg.n_subframes = *a.subframes;
	cfg.validate();
	const fs::path lut_path(a.lut);
	const auto lut = load_lut_checked(lut_path);

	std::vector<DropResult> drops(static_cast<std::size_t>(cfg.n_drops));
	unsigned n = a.threads > 0 ? static_cast<unsigned>(a.threads) : std::thread::hardware_concurrency();
	n = std::clamp<unsigned>(n, 1u, static_cast<unsigned>(cfg.n_drops));
	std::atomic<int> next{0};
	std::exception_ptr err;
	std::mutex mu;
	auto worker = [&] {
		for (int k; (k = next++) < cfg.n_drops;) {
			try {
				drops[static_cast<std::size_t>(k)] = run_drop(cfg, lut, sched, cfg.seed + static_cast<std::uint64_t>(k));
			} catch (...) {
				std::lock_guard lock(mu);
				if (!err)
					err = std::current_exception();
			}
		}
	};
	std::vector<std::thread> pool;
	for (unsigned i = 1; i < n; ++i)
		pool.emplace_back(worker);
	worker();
	for (auto& t : pool)
		t.join();
	if (err)
		std::rethrow_exception(err);

	const auto name = to_string(sched);
	const fs::path out(a.out);
	fs::create_directories(out);
	const auto tp = pooled_throughputs(drops);
	std::ostringstream tcsv;
	write_throughput_csv(tcsv, drops);
	const auto f_tp = out / ("throughput_" + name + ".csv");
	const auto f_cdf = out / ("cdf_" + name + ".csv");
	const auto f_sum = out / ("summary_" + name + ".csv");
	write_file(f_tp, tcsv.str());
	write_file(f_cdf, cdf_text(tp));
	write_file(f_sum, summary_text(name, tp));

	json seeds = json::array();
	for (int k = 0; k < cfg.n_drops; ++k)
		seeds.push_back(cfg.seed + static_cast<std::uint64_t>(k));
	json inputs = {{{"path", fs::absolute(lut_path).lexically_normal().string()}, {"digest", file_digest(lut_path)}}};
	if (!cfg_path.empty())
		inputs.push_back({{"path", fs::absolute(cfg_path).lexically_normal().string()}, {"digest", file_digest(cfg_path)}});
	json outputs = json::array();
	for (const auto& f : {f_tp, f_cdf, f_sum})
		outputs.push_back({{"path", f.filename().string()}, {"digest", file_digest(f)}});
	record_manifest(out, "simulate:" + name,
					{{"command", "simulate"},
					 {"scheduler", name},
					 {"seeds", seeds},
					 {"config", json(cfg)},
					 {"config_digest", config_digest(cfg)},
					 {"inputs", inputs},
					 {"outputs", outputs}});
	return 0;
}

struct CdfArgs
{
	std::string in = "results";
	std::string out;
};

/// Pools every throughput_<scheduler>.csv of a results directory.
int cmd_cdf(const CdfArgs& a)
{
	using namespace dlsim::sysim;
	const fs::path in(a.in);
	const fs::path out = a.out.empty() ? in : fs::path(a.out);
	if (!fs::is_directory(in))
		throw std::runtime_error("not a directory: " + in.string());
	std::vector<fs::path> files;
	for (const auto& e : fs::directory_iterator(in)) {
		const auto fn = e.path().filename().string();
		if (e.is_regular_file() && fn.starts_with("throughput_") && fn.ends_with(".csv"))
			files.push_back(e.path());
	}
	std::sort(files.begin(), files.end());
	if (files.empty())
		throw std::runtime_error("no throughput_<scheduler>.csv files in " + in.string());

	fs::create_directories(out);
	json inputs = json::array(), outputs = json::array();
	std::string combined = "scheduler,percentile,throughput_bps\n";
	for (const auto& f : files) {
		auto name = f.stem().string().substr(std::string("throughput_").size());
		std::ifstream is(f, std::ios::binary);
		const auto tp = read_throughput_csv(is);
		const auto f_cdf = out / ("cdf_" + name + ".csv");
		const auto f_sum = out / ("summary_" + name + ".csv");
		write_file(f_cdf, cdf_text(tp));
		const auto s = summary_text(name, tp);
		write_file(f_sum, s);
		combined += s.substr(s.find('\n') + 1);
		inputs.push_back({{"path", f.filename().string()}, {"digest", file_digest(f)}});
		for (const auto& o : {f_cdf, f_sum})
			outputs.push_back({{"path", o.filename().string()}, {"digest", file_digest(o)}});
	}
	const auto f_all = out / "summary.csv";
	write_file(f_all, combined);
	outputs.push_back({{"path", f_all.filename().string()}, {"digest", file_digest(f_all)}});
	record_manifest(out, "cdf",
					{{"command", "cdf"},
					 {"seeds", json::array()},
					 {"config_digest", dlsim::detail::hex64(dlsim::detail::fnv1a(inputs.dump()))},
					 {"inputs", inputs},
					 {"outputs", outputs}});
	return 0;
}

} // namespace

int main(int argc, char** argv)
{
	CLI::App app{"Downlink LTE link- and system-level simulator"};
	app.set_version_flag("--version", dlsim::kVersion);
	app.require_subcommand(1);

	BlerArgs ba;
	auto* bler = app.add_subcommand("bler", "AWGN BLER curves per CQI");
	bler->add_option("--cqi", ba.cqi, "'all' or comma-separated CQI indices 1..15")->capture_default_str();
	bler->add_option("--seed", ba.seed, "RNG seed")->capture_default_str();
	bler->add_option("--out", ba.out, "output CSV")->capture_default_str();
	bler->add_option("--snr-lo", ba.snr_lo, "lowest SNR in dB")->capture_default_str();
	bler->add_option("--snr-hi", ba.snr_hi, "highest SNR in dB")->capture_default_str();
	bler->add_option("--snr-step", ba.snr_step, "SNR step in dB")->capture_default_str()->check(CLI::PositiveNumber);
	bler->add_option("--min-blocks", ba.min_blocks, "blocks per point at least")->capture_default_str();
	bler->add_option("--min-errors", ba.min_errors, "block errors per point")->capture_default_str();
	bler->add_option("--max-blocks", ba.max_blocks, "block cap per point")->capture_default_str();
	bler->add_option("--clean-points", ba.clean_points, "stop after this many error-free points (0 = never)")
		->capture_default_str();
	bler->add_option("--threads", ba.threads, "worker threads (0 = all cores)")->capture_default_str();

	MapArgs ma;
	auto* map = app.add_subcommand("map-cqi", "SNR-to-CQI thresholds and LUT");
	map->add_option("--curves", ma.curves, "curves CSV from 'bler'")->required();
	map->add_option("--target-bler", ma.target, "BLER target")->capture_default_str()->check(CLI::Range(0.0, 1.0));
	map->add_option("--out", ma.out, "LUT file")->capture_default_str();
	map->add_option("--seed", ma.seed, "seed recorded in the LUT")->capture_default_str();

	SimArgs sa;
	auto* sim = app.add_subcommand("simulate", "system-level drops for one scheduler");
	sim->add_option("--config", sa.config, "JSON config (searched in DLSIM_CONFIG_PATH)");
	sim->add_option("--scheduler", sa.scheduler, "pf, rr or bestcqi")->required();
	sim->add_option("--lut", sa.lut, "LUT from 'map-cqi'")->required();
	sim->add_option("--out", sa.out, "results directory")->capture_default_str();
	sim->add_option("--seed", sa.seed, "first drop seed (overrides config)");
	sim->add_option("--drops", sa.drops, "number of drops (overrides config)");
	sim->add_option("--subframes", sa.subframes, "subframes per drop (overrides config)");
	sim->add_option("--threads", sa.threads, "worker threads (0 = all cores)")->capture_default_str();

	CdfArgs ca;
	auto* cdf = app.add_subcommand("cdf", "pooled CDFs and percentiles of a results directory");
	cdf->add_option("--in", ca.in, "results directory")->capture_default_str();
	cdf->add_option("--out", ca.out, "output directory (default: --in)");

	try {
		app.parse(argc, argv);
		if (bler->parsed())
			parse_cqi_list(ba.cqi);
		if (sim->parsed())
			try {
				dlsim::sysim::parse_scheduler(sa.scheduler);
			} catch (const std::invalid_argument& e) {
				throw CLI::ValidationError("--scheduler", e.what());
			}
	} catch (const CLI::ParseError& e) {
		return app.exit(e);
	}

	try {
		if (bler->parsed())
			return cmd_bler(ba);
		if (map->parsed())
			return cmd_map_cqi(ma);
		if (sim->parsed())
			return cmd_simulate(sa);
		return cmd_cdf(ca);
	} catch (const std::exception& e) {
		std::cerr << "error: " << e.what() << '\n';
		return 1;
	}
}
