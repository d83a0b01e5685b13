#ifndef DLSIM_DETAIL_TEXT_HPP
#define DLSIM_DETAIL_TEXT_HPP

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace dlsim::detail {

// Shortest representation that parses back to the same double.
inline std::string format_double(double v)
{
	char buf[64];
	auto res = std::to_chars(buf, buf + sizeof(buf), v);
	if (res.ec != std::errc{})
		throw std::runtime_error("format_double: conversion failed");
	return std::string(buf, res.ptr);
}

inline std::string_view trim(std::string_view s)
{
	const auto ws = " \t\r\n";
	const auto b = s.find_first_not_of(ws);
	if (b == std::string_view::npos)
		return {};
	const auto e = s.find_last_not_of(ws);
	return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep)
{
	std::vector<std::string_view> out;
	std::size_t start = 0;
	while (true) {
		const auto pos = s.find(sep, start);
		if (pos == std::string_view::npos) {
			out.push_back(trim(s.substr(start)));
			break;
		}
		out.push_back(trim(s.substr(start, pos - start)));
		start = pos + 1;
	}
	return out;
}

inline double parse_double(std::string_view s)
{
	s = trim(s);
	double v = 0.0;
	auto res = std::from_chars(s.data(), s.data() + s.size(), v);
	if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
		throw std::runtime_error("not a number: '" + std::string(s) + "'");
	return v;
}

template <typename Int>
Int parse_int(std::string_view s)
{
	s = trim(s);
	Int v = 0;
	auto res = std::from_chars(s.data(), s.data() + s.size(), v);
	if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
		throw std::runtime_error("not an integer: '" + std::string(s) + "'");
	return v;
}

// 64-bit FNV-1a, used for config and file digests.
inline std::uint64_t fnv1a(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ULL)
{
	for (unsigned char c : data) {
		h ^= c;
		h *= 0x100000001b3ULL;
	}
	return h;
}

inline std::string hex64(std::uint64_t v)
{
	static constexpr char digits[] = "0123456789abcdef";
	std::string s(16, '0');
	for (int i = 15; i >= 0; --i) {
		s[static_cast<std::size_t>(i)] = digits[v & 0xf];
		v >>= 4;
	}
	return s;
}

} // namespace dlsim::detail

#endif // DLSIM_DETAIL_TEXT_HPP
