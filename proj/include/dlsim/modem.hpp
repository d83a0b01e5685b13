#ifndef DLSIM_MODEM_HPP
#define DLSIM_MODEM_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dlsim::linksim {

using Symbol = std::complex<double>;

/// Gray-mapped square QAM with the LTE bit ordering: even-indexed bits drive
/// the in-phase axis, odd-indexed bits the quadrature axis, the first bit of
/// each axis selects the sign. Average symbol energy is 1.
class Constellation
{
public:
	explicit Constellation(int modulation_bits)
		: bits_(modulation_bits)
	{
		if (modulation_bits != 2 && modulation_bits != 4 && modulation_bits != 6)
			throw std::invalid_argument("unsupported modulation order: " + std::to_string(modulation_bits)
										+ " bits per symbol");
		axis_bits_ = bits_ / 2;
		n_levels_ = 1 << axis_bits_;
		const double energy = 2.0 * (std::pow(4.0, axis_bits_) - 1.0) / 3.0;
		scale_ = 1.0 / std::sqrt(energy);
		for (int pattern = 0; pattern < n_levels_; ++pattern) {
			// pattern bit j (MSB first) is the j-th bit of the axis
			double v = 1.0;
			for (int j = axis_bits_ - 1; j >= 1; --j) {
				const int c = (pattern >> (axis_bits_ - 1 - j)) & 1;
				v = static_cast<double>(1 << (axis_bits_ - j)) - (1 - 2 * c) * v;
			}
			const int c0 = (pattern >> (axis_bits_ - 1)) & 1;
			levels_[static_cast<std::size_t>(pattern)] = (1 - 2 * c0) * v * scale_;
		}
	}

	int bits_per_symbol() const { return bits_; }
	int bits_per_axis() const { return axis_bits_; }
	int levels_per_axis() const { return n_levels_; }
	/// amplitude on one axis for an axis bit pattern (first axis bit is the MSB)
	double level(int pattern) const { return levels_[static_cast<std::size_t>(pattern)]; }

	Symbol map(std::span<const std::uint8_t> bits) const
	{
		int pi = 0, pq = 0;
		for (int j = 0; j < axis_bits_; ++j) {
			pi = (pi << 1) | (bits[static_cast<std::size_t>(2 * j)] & 1);
			pq = (pq << 1) | (bits[static_cast<std::size_t>(2 * j + 1)] & 1);
		}
		return {level(pi), level(pq)};
	}

private:
	int bits_;
	int axis_bits_ = 0;
	int n_levels_ = 0;
	double scale_ = 1.0;
	std::array<double, 8> levels_{};
};

inline const Constellation& constellation(int modulation_bits)
{
	static const Constellation qpsk(2), qam16(4), qam64(6);
	switch (modulation_bits) {
	case 2: return qpsk;
	case 4: return qam16;
	case 6: return qam64;
	}
	throw std::invalid_argument("unsupported modulation order: " + std::to_string(modulation_bits)
								+ " bits per symbol");
}

inline std::vector<Symbol> modulate(std::span<const std::uint8_t> bits, int modulation_bits)
{
	const auto& c = constellation(modulation_bits);
	if (bits.size() % static_cast<std::size_t>(modulation_bits) != 0)
		throw std::invalid_argument("modulate: " + std::to_string(bits.size())
									+ " bits not divisible by the modulation order");
	std::vector<Symbol> out(bits.size() / static_cast<std::size_t>(modulation_bits));
	for (std::size_t i = 0; i < out.size(); ++i)
		out[i] = c.map(bits.subspan(i * static_cast<std::size_t>(modulation_bits)));
	return out;
}

/// Noise variance per complex symbol for unit signal power.
inline double noise_variance(double snr_db)
{
	return std::isinf(snr_db) && snr_db > 0 ? 0.0 : std::pow(10.0, -snr_db / 10.0);
}

/// Adds circular complex Gaussian noise; snr_db = +inf leaves the input untouched.
template <typename Rng>
std::vector<Symbol> awgn(std::span<const Symbol> symbols, double snr_db, Rng& rng)
{
	std::vector<Symbol> out(symbols.begin(), symbols.end());
	const double var = noise_variance(snr_db);
	if (var == 0.0)
		return out;
	std::normal_distribution<double> n(0.0, std::sqrt(var / 2.0));
	for (auto& s : out)
		s += Symbol(n(rng), n(rng));
	return out;
}

/// Max-log LLR per coded bit, positive favours bit 0.
inline std::vector<float> soft_demap(std::span<const Symbol> received, int modulation_bits, double noise_var)
{
	if (!(noise_var > 0.0))
		throw std::invalid_argument("soft_demap: noise variance must be positive");
	const auto& c = constellation(modulation_bits);
	const int kb = c.bits_per_axis();
	const int nl = c.levels_per_axis();
	const double inv = 1.0 / noise_var;

	std::vector<float> llr(received.size() * static_cast<std::size_t>(modulation_bits));
	std::array<double, 8> d2{};
	auto axis = [&](double y, float* out, std::size_t stride) {
		for (int p = 0; p < nl; ++p) {
			const double e = y - c.level(p);
			d2[static_cast<std::size_t>(p)] = e * e;
		}
		for (int j = 0; j < kb; ++j) {
			double m0 = std::numeric_limits<double>::infinity();
			double m1 = m0;
			for (int p = 0; p < nl; ++p) {
				const bool one = (p >> (kb - 1 - j)) & 1;
				double& m = one ? m1 : m0;
				m = std::min(m, d2[static_cast<std::size_t>(p)]);
			}
			out[static_cast<std::size_t>(j) * stride] = static_cast<float>((m1 - m0) * inv);
		}
	};
	for (std::size_t i = 0; i < received.size(); ++i) {
		float* base = &llr[i * static_cast<std::size_t>(modulation_bits)];
		axis(received[i].real(), base, 2);
		axis(received[i].imag(), base + 1, 2);
	}
	return llr;
}

} // namespace dlsim::linksim

#endif // DLSIM_MODEM_HPP
