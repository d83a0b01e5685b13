#ifndef DLSIM_CRC_HPP
#define DLSIM_CRC_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace dlsim {

using Bits = std::vector<std::uint8_t>;

// CRC-24 with the LTE CRC24A generator (0x864CFB) and an all-ones initial
// register. The non-zero init makes the all-zero word fail the check, so an
// erased block can never pass by decoding to zeros.
inline constexpr int kCrcBits = 24;

inline std::uint32_t crc24(std::span<const std::uint8_t> bits)
{
	constexpr std::uint32_t poly = 0x864CFB;
	std::uint32_t reg = 0xFFFFFF;
	for (auto b : bits) {
		const std::uint32_t top = ((reg >> 23) & 1u) ^ (b & 1u);
		reg = (reg << 1) & 0xFFFFFF;
		if (top)
			reg ^= poly;
	}
	return reg;
}

/// payload followed by its 24 CRC bits, MSB first
inline Bits attach_crc(std::span<const std::uint8_t> payload)
{
	Bits out(payload.begin(), payload.end());
	const auto c = crc24(payload);
	for (int i = kCrcBits - 1; i >= 0; --i)
		out.push_back(static_cast<std::uint8_t>((c >> i) & 1u));
	return out;
}

inline bool check_crc(std::span<const std::uint8_t> block)
{
	if (block.size() < static_cast<std::size_t>(kCrcBits))
		throw std::invalid_argument("check_crc: block shorter than the checksum");
	const auto n = block.size() - kCrcBits;
	const auto c = crc24(block.first(n));
	for (int i = 0; i < kCrcBits; ++i) {
		const auto expect = static_cast<std::uint8_t>((c >> (kCrcBits - 1 - i)) & 1u);
		if (block[n + static_cast<std::size_t>(i)] != expect)
			return false;
	}
	return true;
}

} // namespace dlsim

#endif // DLSIM_CRC_HPP
