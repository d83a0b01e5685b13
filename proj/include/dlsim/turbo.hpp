#ifndef DLSIM_TURBO_HPP
#define DLSIM_TURBO_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "crc.hpp"

/*
 * Rate-1/3 parallel concatenated convolutional code.
 *
 * Circular buffer layout used by rate matching (length 3K + 4*memory):
 *
 *   [ systematic (K) | tails | parity1/parity2 pairs in subblock order (2K) ]
 *
 * tails = sys1 tail, par1 tail, sys2 tail, par2 tail (memory bits each).
 * The rate matcher reads E = ceil(K / rate) bits circularly from position 0:
 * rate 1 sends only the systematic bits, rate 1/3 sends systematic, tails and
 * all but the last 4*memory parity bits, and rates below 1/3 wrap around and
 * repeat. Tails go ahead of the parity because without them the last info
 * bits are nearly unprotected once the parity near the block end is punctured.
 *
 * The second parity stream is read one position behind the first, so under
 * heavy puncturing the two encoders keep parity for different info bits.
 *
 * LLR convention: positive means bit 0, L = ln P(b=0) / P(b=1).
 */

namespace dlsim::turbo {

inline constexpr double kMinRate = 1.0 / 13.0;
inline constexpr double kMaxRate = 1.0;

struct TurboConfig
{
	int block_length_k = 1024;
	int n_iterations = 8;
	std::uint64_t interleaver_seed = 0;
	/// (feedback, feedforward) generators in octal, MSB is the D^0 tap.
	std::pair<unsigned, unsigned> constituent_polynomials{013, 015};
	/// Extrinsic scaling applied between the constituent max-log-MAP decoders.
	float extrinsic_scale = 0.75f;

	void validate() const
	{
		if (block_length_k < 40)
			throw std::invalid_argument("TurboConfig: block_length_k must be >= 40");
		if (n_iterations < 1)
			throw std::invalid_argument("TurboConfig: n_iterations must be >= 1");
		if (!(extrinsic_scale > 0.0f && extrinsic_scale <= 1.0f))
			throw std::invalid_argument("TurboConfig: extrinsic_scale must lie in (0, 1]");
	}
};

struct CodedBlock
{
	Bits systematic;
	Bits parity1;
	Bits parity2;
	Bits tail;

	std::size_t k() const { return systematic.size(); }
	friend bool operator==(const CodedBlock&, const CodedBlock&) = default;
};

struct DecodeResult
{
	Bits bits;
	bool crc_ok = false;
	int iterations = 0;
};

/// Recursive systematic convolutional trellis built from octal generators.
class Trellis
{
public:
	Trellis(unsigned feedback_octal, unsigned feedforward_octal)
	{
		memory_ = degree(feedback_octal);
		if (memory_ < 1 || memory_ > 6 || degree(feedforward_octal) > memory_)
			throw std::invalid_argument("Trellis: unsupported generator polynomials");
		if (((feedback_octal >> memory_) & 1u) == 0)
			throw std::invalid_argument("Trellis: feedback polynomial needs a D^0 tap");
		n_states_ = 1 << memory_;

		// tap i (coefficient of D^i) is bit (memory - i) of the octal value
		auto tap = [&](unsigned g, int i) { return static_cast<int>((g >> (memory_ - i)) & 1u); };

		next_.resize(static_cast<std::size_t>(n_states_) * 2);
		parity_.resize(static_cast<std::size_t>(n_states_) * 2);
		tail_input_.resize(static_cast<std::size_t>(n_states_));
		for (int s = 0; s < n_states_; ++s) {
			// bit (i-1) of s holds a_{k-i}
			int fb = 0;
			for (int i = 1; i <= memory_; ++i)
				fb ^= tap(feedback_octal, i) & ((s >> (i - 1)) & 1);
			tail_input_[static_cast<std::size_t>(s)] = static_cast<std::uint8_t>(fb);
			for (int u = 0; u < 2; ++u) {
				const int a = u ^ fb;
				int p = tap(feedforward_octal, 0) & a;
				for (int i = 1; i <= memory_; ++i)
					p ^= tap(feedforward_octal, i) & ((s >> (i - 1)) & 1);
				const int ns = ((s << 1) | a) & (n_states_ - 1);
				next_[idx(s, u)] = ns;
				parity_[idx(s, u)] = static_cast<std::uint8_t>(p);
			}
		}
	}

	int memory() const { return memory_; }
	int n_states() const { return n_states_; }
	int next(int s, int u) const { return next_[idx(s, u)]; }
	int parity(int s, int u) const { return parity_[idx(s, u)]; }
	/// input that drives the feedback to zero (used for termination)
	int tail_input(int s) const { return tail_input_[static_cast<std::size_t>(s)]; }

private:
	static int degree(unsigned g)
	{
		int d = -1;
		while (g) {
			++d;
			g >>= 1;
		}
		return d;
	}
	static std::size_t idx(int s, int u) { return static_cast<std::size_t>(s) * 2 + static_cast<std::size_t>(u); }

	int memory_ = 0;
	int n_states_ = 0;
	std::vector<int> next_;
	std::vector<std::uint8_t> parity_;
	std::vector<std::uint8_t> tail_input_;
};

namespace detail {

struct QppCoefficients
{
	int k;
	int f1;
	int f2;
};

// Subset of the LTE QPP interleaver table.
inline constexpr std::array<QppCoefficients, 13> kQppTable = {{
	{40, 3, 10},
	{48, 7, 12},
	{56, 19, 42},
	{64, 7, 16},
	{72, 7, 18},
	{80, 11, 20},
	{88, 5, 22},
	{96, 11, 24},
	{104, 7, 26},
	{112, 41, 84},
	{128, 15, 32},
	{1024, 31, 64},
	{6144, 263, 480},
}};

inline bool is_permutation_of_iota(const std::vector<int>& p)
{
	std::vector<char> seen(p.size(), 0);
	for (int v : p) {
		if (v < 0 || static_cast<std::size_t>(v) >= p.size() || seen[static_cast<std::size_t>(v)])
			return false;
		seen[static_cast<std::size_t>(v)] = 1;
	}
	return true;
}

} // namespace detail

/// Whether K has a quadratic permutation polynomial entry.
inline bool has_qpp(int k)
{
	return std::any_of(detail::kQppTable.begin(), detail::kQppTable.end(),
					   [k](const auto& e) { return e.k == k; });
}

/// Internal interleaver: second encoder input i reads info bit pi[i].
inline std::vector<int> make_interleaver(int k, std::uint64_t seed)
{
	std::vector<int> pi(static_cast<std::size_t>(k));
	for (const auto& e : detail::kQppTable) {
		if (e.k != k)
			continue;
		for (std::int64_t i = 0; i < k; ++i)
			pi[static_cast<std::size_t>(i)] = static_cast<int>((e.f1 * i + e.f2 * i * i) % k);
		if (!detail::is_permutation_of_iota(pi))
			throw std::logic_error("QPP coefficients do not form a permutation");
		return pi;
	}
	std::iota(pi.begin(), pi.end(), 0);
	std::mt19937_64 rng(seed);
	std::shuffle(pi.begin(), pi.end(), rng);
	return pi;
}

/// Order in which a length-n parity stream is read into the circular buffer:
/// 32-column block interleaver with bit-reversed column order, leading dummies
/// dropped. Any prefix of the order is spread evenly over the block.
inline std::vector<int> subblock_order(int n)
{
	static constexpr std::array<int, 32> perm = {0, 16, 8, 24, 4, 20, 12, 28, 2, 18, 10, 26, 6, 22, 14, 30,
												 1, 17, 9, 25, 5, 21, 13, 29, 3, 19, 11, 27, 7, 23, 15, 31};
	const int cols = 32;
	const int rows = (n + cols - 1) / cols;
	const int dummies = rows * cols - n;
	std::vector<int> order;
	order.reserve(static_cast<std::size_t>(n));
	for (int c : perm)
		for (int r = 0; r < rows; ++r) {
			const int pos = r * cols + c - dummies;
			if (pos >= 0)
				order.push_back(pos);
		}
	return order;
}

/// Number of transmitted bits for K info bits at a code rate.
inline std::size_t rate_matched_length(std::size_t k, double target_rate)
{
	if (!(target_rate >= kMinRate - 1e-12 && target_rate <= kMaxRate + 1e-12))
		throw std::invalid_argument("code rate " + std::to_string(target_rate) + " outside [1/13, 1]");
	return static_cast<std::size_t>(std::ceil(static_cast<double>(k) / target_rate - 1e-9));
}

class TurboCodec
{
public:
	explicit TurboCodec(TurboConfig cfg)
		: cfg_(cfg), trellis_(cfg.constituent_polynomials.first, cfg.constituent_polynomials.second)
	{
		cfg_.validate();
		branches_ = make_branches(trellis_);
		pi_ = make_interleaver(cfg_.block_length_k, cfg_.interleaver_seed);
		order_ = subblock_order(cfg_.block_length_k);
		order2_.resize(order_.size());
		for (std::size_t j = 0; j < order_.size(); ++j)
			order2_[j] = (order_[j] + 1) % cfg_.block_length_k;
	}

	const TurboConfig& config() const { return cfg_; }
	const Trellis& trellis() const { return trellis_; }
	const std::vector<int>& interleaver() const { return pi_; }
	int k() const { return cfg_.block_length_k; }
	int tail_length() const { return 4 * trellis_.memory(); }
	std::size_t buffer_length() const { return 3 * static_cast<std::size_t>(k()) + static_cast<std::size_t>(tail_length()); }

	CodedBlock encode(std::span<const std::uint8_t> info) const
	{
		if (info.size() != static_cast<std::size_t>(k()))
			throw std::invalid_argument("encode: info length " + std::to_string(info.size()) + " != K "
										+ std::to_string(k()));
		CodedBlock out;
		out.systematic.assign(info.begin(), info.end());
		for (auto& b : out.systematic)
			b &= 1u;

		Bits interleaved(info.size());
		for (std::size_t i = 0; i < info.size(); ++i)
			interleaved[i] = out.systematic[static_cast<std::size_t>(pi_[i])];

		Bits tail1_sys, tail1_par, tail2_sys, tail2_par;
		out.parity1 = encode_constituent(out.systematic, tail1_sys, tail1_par);
		out.parity2 = encode_constituent(interleaved, tail2_sys, tail2_par);
		for (const Bits* t : {&tail1_sys, &tail1_par, &tail2_sys, &tail2_par})
			out.tail.insert(out.tail.end(), t->begin(), t->end());
		return out;
	}

	/// Circular buffer for a coded block (see layout at the top of this file).
	Bits circular_buffer(const CodedBlock& block) const
	{
		check_block(block);
		const auto kk = static_cast<std::size_t>(k());
		Bits buf(buffer_length());
		const std::size_t p0 = kk + static_cast<std::size_t>(tail_length());
		std::copy(block.systematic.begin(), block.systematic.end(), buf.begin());
		for (std::size_t j = 0; j < kk; ++j) {
			buf[p0 + 2 * j] = block.parity1[static_cast<std::size_t>(order_[j])];
			buf[p0 + 2 * j + 1] = block.parity2[static_cast<std::size_t>(order2_[j])];
		}
		std::copy(block.tail.begin(), block.tail.end(), buf.begin() + static_cast<std::ptrdiff_t>(kk));
		return buf;
	}

	Bits rate_match(const CodedBlock& block, double target_rate) const
	{
		const auto e = rate_matched_length(static_cast<std::size_t>(k()), target_rate);
		const auto buf = circular_buffer(block);
		Bits out(e);
		for (std::size_t j = 0; j < e; ++j)
			out[j] = buf[j % buf.size()];
		return out;
	}

	/// Soft combining of received LLRs back into circular-buffer positions;
	/// positions never transmitted stay at 0.
	std::vector<float> derate_match(std::span<const float> llrs, double target_rate) const
	{
		const auto e = rate_matched_length(static_cast<std::size_t>(k()), target_rate);
		if (llrs.size() != e)
			throw std::invalid_argument("decode: expected " + std::to_string(e) + " LLRs, got "
										+ std::to_string(llrs.size()));
		std::vector<float> buf(buffer_length(), 0.0f);
		for (std::size_t j = 0; j < e; ++j)
			buf[j % buf.size()] += llrs[j];
		return buf;
	}

	/// Iterative max-log-MAP decoding. Stops early once the trailing CRC-24 of
	/// the hard decisions checks.
	DecodeResult decode(std::span<const float> llrs, double target_rate) const
	{
		const auto buf = derate_match(llrs, target_rate);
		const auto kk = static_cast<std::size_t>(k());
		const auto mem = static_cast<std::size_t>(trellis_.memory());
		const std::size_t steps = kk + mem;

		const std::size_t p0 = kk + 4 * mem;
		std::vector<float> ls1(steps), lp1(steps), ls2(steps), lp2(steps);
		for (std::size_t i = 0; i < kk; ++i)
			ls1[i] = buf[i];
		for (std::size_t j = 0; j < kk; ++j) {
			lp1[static_cast<std::size_t>(order_[j])] = buf[p0 + 2 * j];
			lp2[static_cast<std::size_t>(order2_[j])] = buf[p0 + 2 * j + 1];
		}
		for (std::size_t i = 0; i < kk; ++i)
			ls2[i] = ls1[static_cast<std::size_t>(pi_[i])];
		const std::size_t t0 = kk;
		for (std::size_t i = 0; i < mem; ++i) {
			ls1[kk + i] = buf[t0 + i];
			lp1[kk + i] = buf[t0 + mem + i];
			ls2[kk + i] = buf[t0 + 2 * mem + i];
			lp2[kk + i] = buf[t0 + 3 * mem + i];
		}

		std::vector<float> la1(kk, 0.0f), la2(kk, 0.0f), le(kk), lout(kk);
		std::vector<float> alpha((steps + 1) * static_cast<std::size_t>(trellis_.n_states()));

		DecodeResult res;
		res.bits.assign(kk, 0);
		for (int it = 0; it < cfg_.n_iterations; ++it) {
			siso(ls1, lp1, la1, alpha, le, lout);
			for (std::size_t i = 0; i < kk; ++i)
				la2[i] = cfg_.extrinsic_scale * le[static_cast<std::size_t>(pi_[i])];

			siso(ls2, lp2, la2, alpha, le, lout);
			for (std::size_t i = 0; i < kk; ++i) {
				const auto dst = static_cast<std::size_t>(pi_[i]);
				la1[dst] = cfg_.extrinsic_scale * le[i];
				res.bits[dst] = lout[i] < 0.0f ? 1 : 0;
			}
			res.iterations = it + 1;
			if (check_crc(res.bits)) {
				res.crc_ok = true;
				break;
			}
		}
		return res;
	}

private:
	void check_block(const CodedBlock& b) const
	{
		const auto kk = static_cast<std::size_t>(k());
		if (b.systematic.size() != kk || b.parity1.size() != kk || b.parity2.size() != kk
			|| b.tail.size() != static_cast<std::size_t>(tail_length()))
			throw std::invalid_argument("coded block does not match codec dimensions");
	}

	Bits encode_constituent(const Bits& in, Bits& tail_sys, Bits& tail_par) const
	{
		Bits par(in.size());
		int s = 0;
		for (std::size_t i = 0; i < in.size(); ++i) {
			par[i] = static_cast<std::uint8_t>(trellis_.parity(s, in[i]));
			s = trellis_.next(s, in[i]);
		}
		for (int i = 0; i < trellis_.memory(); ++i) {
			const int u = trellis_.tail_input(s);
			tail_sys.push_back(static_cast<std::uint8_t>(u));
			tail_par.push_back(static_cast<std::uint8_t>(trellis_.parity(s, u)));
			s = trellis_.next(s, u);
		}
		return par;
	}

	// One constituent max-log-MAP pass. le receives the (unscaled) extrinsic
	// LLR and lout the full a-posteriori LLR for the K information steps.
	// Branch metrics take one of four values per step, indexed by 2*u + parity.
	void siso(const std::vector<float>& ls, const std::vector<float>& lp, const std::vector<float>& la,
			  std::vector<float>& alpha, std::vector<float>& le, std::vector<float>& lout) const
	{
		if (trellis_.n_states() == 8)
			siso_impl<8>(ls, lp, la, alpha, le, lout);
		else
			siso_impl<0>(ls, lp, la, alpha, le, lout);
	}

	// FixedStates > 0 lets the compiler unroll the state loops.
	template <int FixedStates>
	void siso_impl(const std::vector<float>& ls, const std::vector<float>& lp, const std::vector<float>& la,
				   std::vector<float>& alpha, std::vector<float>& le, std::vector<float>& lout) const
	{
		constexpr float kNeg = -1e30f;
		const int ns = FixedStates > 0 ? FixedStates : trellis_.n_states();
		const auto nsz = static_cast<std::size_t>(ns);
		const std::size_t kk = la.size();
		const std::size_t steps = ls.size();
		const auto& tb = branches_;

		std::fill(alpha.begin(), alpha.begin() + static_cast<std::ptrdiff_t>(nsz), kNeg);
		alpha[0] = 0.0f;
		float g[4];
		for (std::size_t t = 0; t < steps; ++t) {
			const float a = 0.5f * (ls[t] + (t < kk ? la[t] : 0.0f));
			const float b = 0.5f * lp[t];
			g[0] = a + b;
			g[1] = a - b;
			g[2] = -a + b;
			g[3] = -a - b;
			const float* cur = &alpha[t * nsz];
			float* nxt = &alpha[(t + 1) * nsz];
			float norm = kNeg;
			for (int s = 0; s < ns; ++s) {
				const auto& p = tb.pred[static_cast<std::size_t>(s)];
				const float v = std::max(cur[p.state[0]] + g[p.cls[0]], cur[p.state[1]] + g[p.cls[1]]);
				nxt[s] = v;
				norm = std::max(norm, v);
			}
			for (int s = 0; s < ns; ++s)
				nxt[s] -= norm;
		}

		std::array<float, kMaxStates> beta, prev;
		std::fill(beta.begin(), beta.end(), kNeg);
		beta[0] = 0.0f; // terminated in state 0
		for (std::size_t t = steps; t-- > 0;) {
			const float a = 0.5f * (ls[t] + (t < kk ? la[t] : 0.0f));
			const float b = 0.5f * lp[t];
			g[0] = a + b;
			g[1] = a - b;
			g[2] = -a + b;
			g[3] = -a - b;
			const float* cur = &alpha[t * nsz];
			float best0 = kNeg, best1 = kNeg, norm = kNeg;
			for (int s = 0; s < ns; ++s) {
				const auto& f = tb.succ[static_cast<std::size_t>(s)];
				const float m0 = g[f.cls[0]] + beta[static_cast<std::size_t>(f.state[0])];
				const float m1 = g[f.cls[1]] + beta[static_cast<std::size_t>(f.state[1])];
				best0 = std::max(best0, cur[s] + m0);
				best1 = std::max(best1, cur[s] + m1);
				const float m = std::max(m0, m1);
				prev[static_cast<std::size_t>(s)] = m;
				norm = std::max(norm, m);
			}
			for (int s = 0; s < ns; ++s)
				beta[static_cast<std::size_t>(s)] = prev[static_cast<std::size_t>(s)] - norm;
			if (t < kk) {
				lout[t] = best0 - best1;
				le[t] = lout[t] - ls[t] - la[t];
			}
		}
	}

	static constexpr std::size_t kMaxStates = 64;

	struct Edge
	{
		int state[2];
		int cls[2];
	};
	struct BranchTables
	{
		std::array<Edge, kMaxStates> pred{}; // by destination state
		std::array<Edge, kMaxStates> succ{}; // by source state, index = input bit
	};

	static BranchTables make_branches(const Trellis& t)
	{
		BranchTables b;
		std::array<int, kMaxStates> fill{};
		for (int s = 0; s < t.n_states(); ++s)
			for (int u = 0; u < 2; ++u) {
				const int dst = t.next(s, u);
				const int cls = 2 * u + t.parity(s, u);
				b.succ[static_cast<std::size_t>(s)].state[u] = dst;
				b.succ[static_cast<std::size_t>(s)].cls[u] = cls;
				auto& slot = fill[static_cast<std::size_t>(dst)];
				if (slot > 1)
					throw std::logic_error("trellis state with more than two predecessors");
				b.pred[static_cast<std::size_t>(dst)].state[slot] = s;
				b.pred[static_cast<std::size_t>(dst)].cls[slot] = cls;
				++slot;
			}
		return b;
	}

	TurboConfig cfg_;
	Trellis trellis_;
	BranchTables branches_;
	std::vector<int> pi_;
	std::vector<int> order_;
	std::vector<int> order2_;
};

/// Free-function forms; each builds a codec for the given configuration.
inline CodedBlock encode(std::span<const std::uint8_t> info, const TurboConfig& cfg)
{
	return TurboCodec(cfg).encode(info);
}

inline Bits rate_match(const CodedBlock& block, double target_rate, const TurboConfig& cfg = {})
{
	TurboConfig c = cfg;
	c.block_length_k = static_cast<int>(block.k());
	return TurboCodec(c).rate_match(block, target_rate);
}

inline DecodeResult decode(std::span<const float> llrs, const TurboConfig& cfg, double target_rate)
{
	return TurboCodec(cfg).decode(llrs, target_rate);
}

} // namespace dlsim::turbo

#endif // DLSIM_TURBO_HPP
