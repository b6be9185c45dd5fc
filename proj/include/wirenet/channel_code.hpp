#pragma once

// Random channel codes: codewords drawn i.i.d. per symbol from the
// capacity-achieving input law, maximum-likelihood decoding. The decoder is ML
// rather than joint typicality because ML is never worse and stays well
// defined at tiny blocklengths; a joint-typicality decoder is available
// separately for fidelity experiments.

#include <cstdint>
#include <optional>
#include <vector>

#include "wirenet/blahut_arimoto.hpp"
#include "wirenet/channel.hpp"
#include "wirenet/pmf.hpp"
#include "wirenet/rng.hpp"
#include "wirenet/typicality.hpp"

namespace wirenet {

/// Materialized codebooks are capped at this many message bits. The cap keeps
/// storage and ML scans at desk scale; larger requests fail loudly.
inline constexpr std::size_t kMaxMessageBits = 22;

class ChannelCodebook {
  public:
    ChannelCodebook() = default;

    ChannelCodebook(std::size_t message_bits, std::size_t blocklength, Pmf input_law,
                    std::uint64_t seed, bool capacity_warning)
        : message_bits_(message_bits),
          blocklength_(blocklength),
          input_law_(std::move(input_law)),
          seed_(seed),
          capacity_warning_(capacity_warning) {
        if (message_bits_ > kMaxMessageBits)
            throw resource_error("ChannelCodebook: message size above the materialization cap");
        if (blocklength_ == 0) throw std::invalid_argument("ChannelCodebook: empty blocklength");
        const std::size_t k = input_law_.alphabet_size();
        if (k > 255) throw std::invalid_argument("ChannelCodebook: alphabet too large");
        RngStream rng(seed_, {0, 0, 0, 0});
        symbols_.resize(message_count() * blocklength_);
        for (std::size_t i = 0; i < symbols_.size(); ++i)
            symbols_[i] = static_cast<std::uint8_t>(rng.next_index(input_law_.probs()));
        pack_if_binary();
    }

    std::size_t message_bits() const { return message_bits_; }
    std::size_t message_count() const { return std::size_t(1) << message_bits_; }
    std::size_t blocklength() const { return blocklength_; }
    std::uint64_t seed() const { return seed_; }
    const Pmf& input_law() const { return input_law_; }
    bool capacity_warning() const { return capacity_warning_; }

    Sequence codeword(std::size_t m) const {
        if (m >= message_count())
            throw std::invalid_argument("ChannelCodebook: message index out of range");
        Sequence s(blocklength_);
        const std::uint8_t* base = &symbols_[m * blocklength_];
        for (std::size_t i = 0; i < blocklength_; ++i) s[i] = base[i];
        return s;
    }

    const std::uint8_t* raw(std::size_t m) const { return &symbols_[m * blocklength_]; }

    bool binary_packed() const { return !packed_.empty(); }
    std::uint64_t packed_word(std::size_t m) const { return packed_[m]; }

  private:
    void pack_if_binary() {
        if (input_law_.alphabet_size() != 2 || blocklength_ > 64) return;
        packed_.resize(message_count());
        for (std::size_t m = 0; m < message_count(); ++m) {
            std::uint64_t w = 0;
            const std::uint8_t* base = &symbols_[m * blocklength_];
            for (std::size_t i = 0; i < blocklength_; ++i)
                if (base[i]) w |= (std::uint64_t(1) << i);
            packed_[m] = w;
        }
    }

    std::size_t message_bits_ = 0;
    std::size_t blocklength_ = 0;
    Pmf input_law_;
    std::uint64_t seed_ = 0;
    bool capacity_warning_ = false;
    std::vector<std::uint8_t> symbols_;
    std::vector<std::uint64_t> packed_;
};

/// Codebook with 2^floor(N*R) codewords of length N, i.i.d. per symbol from
/// the capacity-achieving input of `ch`.
inline ChannelCodebook build_channel_code(const Dmc& ch, double rate, std::size_t blocklength,
                                          std::uint64_t seed) {
    if (!(rate > 0.0)) throw std::invalid_argument("build_channel_code: rate must be positive");
    const double bits_d = std::floor(rate * static_cast<double>(blocklength));
    if (bits_d < 1.0) throw std::invalid_argument("build_channel_code: floor(N*R) must be >= 1");
    const auto cap = ba_capacity(ch, 1e-9);
    const bool warn = cap.capacity < 1e-9;
    return ChannelCodebook(static_cast<std::size_t>(bits_d), blocklength, cap.optimal_input, seed,
                           warn);
}

/// Same construction with the message size given directly in bits.
inline ChannelCodebook build_channel_code_bits(const Dmc& ch, std::size_t message_bits,
                                               std::size_t blocklength, std::uint64_t seed) {
    if (message_bits == 0)
        throw std::invalid_argument("build_channel_code_bits: need at least one message bit");
    const auto cap = ba_capacity(ch, 1e-9);
    return ChannelCodebook(message_bits, blocklength, cap.optimal_input, seed,
                           cap.capacity < 1e-9);
}

inline Sequence channel_encode(const ChannelCodebook& cb, std::size_t m) {
    return cb.codeword(m);
}

/// Maximum-likelihood decoding under `ch`; ties broken by smallest index.
inline std::size_t channel_decode(const ChannelCodebook& cb, const Sequence& y, const Dmc& ch) {
    if (y.size() != cb.blocklength())
        throw std::invalid_argument("channel_decode: length mismatch");
    check_symbols(y, ch.output_size(), "channel_decode");

    // Binary symmetric fast path: ML = minimum Hamming distance.
    if (cb.binary_packed() && ch.input_size() == 2 && ch.output_size() == 2 &&
        ch.at(0, 1) == ch.at(1, 0) && ch.at(0, 1) < 0.5) {
        std::uint64_t yw = 0;
        for (std::size_t i = 0; i < y.size(); ++i)
            if (y[i]) yw |= (std::uint64_t(1) << i);
        std::size_t best = 0;
        int best_d = 65;
        for (std::size_t m = 0; m < cb.message_count(); ++m) {
            const int d = __builtin_popcountll(cb.packed_word(m) ^ yw);
            if (d < best_d) {
                best_d = d;
                best = m;
            }
        }
        return best;
    }

    // General path: per-symbol log-likelihood table.
    const std::size_t ny = ch.output_size();
    std::vector<double> logw(ch.input_size() * ny);
    for (std::size_t x = 0; x < ch.input_size(); ++x)
        for (std::size_t yy = 0; yy < ny; ++yy) {
            const double w = ch.at(x, yy);
            logw[x * ny + yy] = w > 0.0 ? std::log(w) : -1e300;
        }
    std::size_t best = 0;
    double best_ll = -std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < cb.message_count(); ++m) {
        const std::uint8_t* cw = cb.raw(m);
        double ll = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i)
            ll += logw[std::size_t(cw[i]) * ny + std::size_t(y[i])];
        if (ll > best_ll) {
            best_ll = ll;
            best = m;
        }
    }
    return best;
}

/// Joint-typicality decoding: the unique message whose codeword is jointly
/// epsilon-typical with y under p_x(x) p(y|x); nullopt when none or multiple.
inline std::optional<std::size_t> channel_decode_typical(const ChannelCodebook& cb,
                                                         const Sequence& y, const Dmc& ch,
                                                         double eps) {
    if (y.size() != cb.blocklength())
        throw std::invalid_argument("channel_decode_typical: length mismatch");
    const JointPmf joint = ch.joint_with_input(cb.input_law());
    std::optional<std::size_t> found;
    for (std::size_t m = 0; m < cb.message_count(); ++m) {
        if (is_jointly_typical(cb.codeword(m), y, joint, eps)) {
            if (found) return std::nullopt;  // ambiguous
            found = m;
        }
    }
    return found;
}

struct MaxErrorEstimate {
    double value = 0.0;            // max over sampled messages of the error fraction
    std::size_t unsampled = 0;     // messages never drawn (no estimate; upper bound 1)
    std::size_t trials = 0;
};

/// Monte Carlo estimate of the maximal per-message decoding error probability,
/// by uniform message sampling with per-message tallies.
inline MaxErrorEstimate estimate_max_error(const ChannelCodebook& cb, const Dmc& ch,
                                           std::size_t trials, RngStream& rng) {
    if (trials == 0) throw std::invalid_argument("estimate_max_error: trials must be >= 1");
    std::vector<std::uint32_t> sent(cb.message_count(), 0), errs(cb.message_count(), 0);
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t m = rng.next_below(cb.message_count());
        const Sequence y = dmc_transmit(ch, cb.codeword(m), rng);
        ++sent[m];
        if (channel_decode(cb, y, ch) != m) ++errs[m];
    }
    MaxErrorEstimate est;
    est.trials = trials;
    for (std::size_t m = 0; m < cb.message_count(); ++m) {
        if (sent[m] == 0)
            ++est.unsampled;
        else
            est.value = std::max(est.value, double(errs[m]) / double(sent[m]));
    }
    return est;
}

}  // namespace wirenet
