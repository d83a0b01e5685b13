#ifndef DLSIM_LUT_HPP
#define DLSIM_LUT_HPP

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cqi_map.hpp"
#include "detail/text.hpp"
#include "effective_sinr.hpp"
#include "linksim.hpp"
#include "mutual_information.hpp"

/*
 * LUT file, plain text, LF line endings:
 *
 *   dlsim-lut,1
 *   seed,<generating seed>
 *   config,<16 hex digits, digest of the generating configuration>
 *   digest,<16 hex digits, FNV-1a of every byte after this line>
 *   [thresholds]
 *   target_bler,<value>
 *   cqi,snr_db
 *   <15 rows>
 *   [alphas]
 *   cqi,alpha1,alpha2
 *   <one row per CQI>
 *   [mi_table]                      (one section per modulation)
 *   modulation_bits,lo_db,step_db,count
 *   <header values>
 *   snr_db,mi
 *   <count rows>
 *   [curves]
 *   cqi,snr_db,bler,n_blocks,n_errors
 *   <rows>
 *   [end]
 *
 * Doubles use the shortest round-trip representation, so save/load is exact.
 */

namespace dlsim {

inline constexpr int kLutVersion = 1;

struct LutData
{
	SnrCqiMap map;
	MiTableSet mi;
	std::vector<MiesmParams> alphas; ///< index cqi - 1
	std::vector<linksim::BlerCurve> curves;
	std::uint64_t seed = 0;
	std::string config_digest = "0000000000000000";

	const MiesmParams& alpha(int cqi_index) const { return alphas.at(static_cast<std::size_t>(cqi_index - 1)); }
	const linksim::BlerCurve& curve(int cqi_index) const
	{
		for (const auto& c : curves)
			if (c.cqi_index == cqi_index)
				return c;
		throw std::out_of_range("LUT has no BLER curve for CQI " + std::to_string(cqi_index));
	}

	friend bool operator==(const LutData&, const LutData&) = default;
};

struct LutLoadResult
{
	LutData data;
	std::vector<std::string> warnings;
};

namespace detail {

inline std::string lut_body(const LutData& d)
{
	std::ostringstream os;
	os << "[thresholds]\n";
	os << "target_bler," << format_double(d.map.target_bler) << '\n';
	os << "cqi,snr_db\n";
	for (std::size_t i = 0; i < d.map.thresholds_db.size(); ++i)
		os << i + 1 << ',' << format_double(d.map.thresholds_db[i]) << '\n';
	os << "[alphas]\n";
	os << "cqi,alpha1,alpha2\n";
	for (std::size_t i = 0; i < d.alphas.size(); ++i)
		os << i + 1 << ',' << format_double(d.alphas[i].alpha1) << ',' << format_double(d.alphas[i].alpha2) << '\n';
	for (const auto& t : d.mi.tables) {
		os << "[mi_table]\n";
		os << "modulation_bits,lo_db,step_db,count\n";
		os << t.modulation_bits << ',' << format_double(t.lo_db) << ',' << format_double(t.step_db) << ','
		   << t.mi.size() << '\n';
		os << "snr_db,mi\n";
		for (std::size_t i = 0; i < t.mi.size(); ++i)
			os << format_double(t.snr_at(i)) << ',' << format_double(t.mi[i]) << '\n';
	}
	os << "[curves]\n";
	linksim::write_curves_csv(os, d.curves);
	os << "[end]\n";
	return os.str();
}

class LineReader
{
public:
	explicit LineReader(std::istream& is) : is_(is) {}

	bool next(std::string& line)
	{
		if (!std::getline(is_, line))
			return false;
		++line_no_;
		if (!line.empty() && line.back() == '\r')
			line.pop_back();
		return true;
	}
	std::string require(const char* what)
	{
		std::string line;
		if (!next(line))
			fail(std::string("unexpected end of file, expected ") + what);
		return line;
	}
	void expect(const std::string& literal)
	{
		const auto line = require(literal.c_str());
		if (line != literal)
			fail("expected '" + literal + "', found '" + line + "'");
	}
	[[noreturn]] void fail(const std::string& msg) const
	{
		throw std::runtime_error("LUT line " + std::to_string(line_no_) + ": " + msg);
	}

private:
	std::istream& is_;
	int line_no_ = 0;
};

inline std::vector<std::string> fields(LineReader& r, const std::string& line, std::size_t n)
{
	const auto f = split(line, ',');
	if (f.size() != n)
		r.fail("expected " + std::to_string(n) + " fields in '" + line + "'");
	return {f.begin(), f.end()};
}

inline std::string value_of(LineReader& r, const std::string& line, const std::string& key)
{
	const auto f = fields(r, line, 2);
	if (f[0] != key)
		r.fail("expected key '" + key + "'");
	return f[1];
}

} // namespace detail

inline void lut_save(const LutData& d, std::ostream& os)
{
	const auto body = detail::lut_body(d);
	os << "dlsim-lut," << kLutVersion << '\n';
	os << "seed," << d.seed << '\n';
	os << "config," << d.config_digest << '\n';
	os << "digest," << detail::hex64(detail::fnv1a(body)) << '\n';
	os << body;
}

inline void lut_save(const LutData& d, const std::string& path)
{
	std::ofstream os(path, std::ios::binary);
	if (!os)
		throw std::runtime_error("cannot open LUT for writing: " + path);
	lut_save(d, os);
	if (!os)
		throw std::runtime_error("failed writing LUT: " + path);
}

/// Parses a LUT. A wrong version or malformed content throws; a digest that
/// does not match the body is reported as a warning and the data is returned.
inline LutLoadResult lut_load(std::istream& is)
{
	using namespace detail;
	std::string all((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
	std::istringstream in(all);
	LineReader r(in);
	LutLoadResult res;
	auto& d = res.data;

	{
		const auto f = fields(r, r.require("version header"), 2);
		if (f[0] != "dlsim-lut")
			r.fail("not a dlsim LUT file");
		const int version = parse_int<int>(f[1]);
		if (version != kLutVersion)
			throw std::runtime_error("LUT format version " + std::to_string(version) + " not supported (expected "
									 + std::to_string(kLutVersion) + ")");
	}
	d.seed = parse_int<std::uint64_t>(value_of(r, r.require("seed"), "seed"));
	d.config_digest = value_of(r, r.require("config"), "config");
	const std::string digest = value_of(r, r.require("digest"), "digest");

	// The body starts right after the fourth newline.
	std::size_t body_pos = 0;
	for (int i = 0; i < 4; ++i)
		body_pos = all.find('\n', body_pos) + 1;
	const std::string_view body(all.data() + body_pos, all.size() - body_pos);
	const auto actual = hex64(fnv1a(body));
	if (actual != digest)
		res.warnings.push_back("LUT digest mismatch: file says " + digest + ", content hashes to " + actual);

	r.expect("[thresholds]");
	d.map.target_bler = parse_double(value_of(r, r.require("target_bler"), "target_bler"));
	r.expect("cqi,snr_db");
	std::string line;
	while (true) {
		line = r.require("threshold row or [alphas]");
		if (line == "[alphas]")
			break;
		const auto f = fields(r, line, 2);
		if (parse_int<int>(f[0]) != static_cast<int>(d.map.thresholds_db.size()) + 1)
			r.fail("thresholds out of order");
		d.map.thresholds_db.push_back(parse_double(f[1]));
	}
	r.expect("cqi,alpha1,alpha2");
	while (true) {
		line = r.require("alpha row or next section");
		if (line.starts_with("["))
			break;
		const auto f = fields(r, line, 3);
		if (parse_int<int>(f[0]) != static_cast<int>(d.alphas.size()) + 1)
			r.fail("alphas out of order");
		d.alphas.push_back({parse_double(f[1]), parse_double(f[2])});
	}
	while (line == "[mi_table]") {
		r.expect("modulation_bits,lo_db,step_db,count");
		const auto h = fields(r, r.require("mi table header"), 4);
		MiTable t;
		t.modulation_bits = parse_int<int>(h[0]);
		t.lo_db = parse_double(h[1]);
		t.step_db = parse_double(h[2]);
		const auto count = parse_int<std::size_t>(h[3]);
		r.expect("snr_db,mi");
		for (std::size_t i = 0; i < count; ++i) {
			const auto f = fields(r, r.require("mi row"), 2);
			t.mi.push_back(parse_double(f[1]));
		}
		d.mi.tables.push_back(std::move(t));
		line = r.require("next section");
	}
	if (line != "[curves]")
		r.fail("expected [curves], found '" + line + "'");
	std::string curve_text;
	while (true) {
		line = r.require("curve row or [end]");
		if (line == "[end]")
			break;
		curve_text += line;
		curve_text += '\n';
	}
	std::istringstream cs(curve_text);
	d.curves = linksim::read_curves_csv(cs);
	return res;
}

inline LutLoadResult lut_load(const std::string& path)
{
	std::ifstream is(path, std::ios::binary);
	if (!is)
		throw std::runtime_error("cannot open LUT: " + path);
	return lut_load(is);
}

} // namespace dlsim

#endif // DLSIM_LUT_HPP
