#include "ringosc/signal.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <random>
#include <string_view>

namespace ringosc {

namespace {

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t at) {
    return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
           (static_cast<std::uint32_t>(b[at + 2]) << 16) | (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t at) {
    return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t at, std::string_view tag) {
    return std::equal(tag.begin(), tag.end(), b.begin() + static_cast<long>(at),
                      [](char c, std::uint8_t u) { return static_cast<std::uint8_t>(c) == u; });
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
    }
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_tag(std::vector<std::uint8_t>& out, std::string_view tag) {
    for (char c : tag) {
        out.push_back(static_cast<std::uint8_t>(c));
    }
}

// Contiguous-bin average of v[0, count) onto n sites, then the affine map
// min -> 0 with largest cyclic forward difference -> beta * tau.
Pattern scale_to_pattern(std::span<const double> v, std::size_t n, double tau, double beta) {
    if (!(beta > 0.0 && beta < 1.0)) {
        throw DomainError("pattern scaling: beta must lie in (0, 1)");
    }
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw DomainError("pattern scaling: tau must be positive");
    }
    if (n < 2 || n > v.size()) {
        throw DomainError("pattern scaling: need 2 <= n <= number of retained values");
    }
    std::vector<double> sites(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t a = j * v.size() / n;
        const std::size_t b = (j + 1) * v.size() / n;
        double sum = 0.0;
        for (std::size_t k = a; k < b; ++k) {
            sum += v[k];
        }
        sites[j] = sum / static_cast<double>(b - a);
    }
    const double lo = *std::min_element(sites.begin(), sites.end());
    double max_diff = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        max_diff = std::max(max_diff, sites[(j + 1) % n] - sites[j]);
    }
    if (!(max_diff > 0.0)) {
        throw DomainError("pattern scaling: input is constant (e.g. an all-zero spectrum) and carries no pattern");
    }
    Pattern p;
    p.values.resize(n, 0.0);
    const double scale = beta * tau / max_diff;
    for (std::size_t j = 0; j < n; ++j) {
        p.values[j] = scale * (sites[j] - lo);
    }
    return p;
}

}  // namespace

void AudioClip::validate() const {
    if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) {
        throw DomainError("audio clip: sample rate must be positive");
    }
    if (samples.empty()) {
        throw DomainError("audio clip: no samples");
    }
}

AudioClip parse_wav(std::span<const std::uint8_t> b) {
    if (b.size() < 12 || !tag_is(b, 0, "RIFF") || !tag_is(b, 8, "WAVE")) {
        throw WavError("wav: missing RIFF/WAVE header");
    }
    std::size_t at = 12;
    bool have_fmt = false;
    std::uint16_t channels = 0;
    std::uint16_t bits = 0;
    std::uint32_t rate = 0;
    while (at + 8 <= b.size()) {
        const std::uint32_t size = read_u32(b, at + 4);
        const std::size_t body = at + 8;
        if (tag_is(b, at, "fmt ")) {
            if (size < 16 || body + size > b.size()) {
                throw WavError("wav: truncated fmt chunk");
            }
            const std::uint16_t format = read_u16(b, body);
            channels = read_u16(b, body + 2);
            rate = read_u32(b, body + 4);
            bits = read_u16(b, body + 14);
            if (format != 1) {
                throw WavError("wav: unsupported codec (only PCM is read)");
            }
            if (bits != 16) {
                throw WavError("wav: unsupported sample width " + std::to_string(bits) + " bits (PCM16 only)");
            }
            if (channels != 1 && channels != 2) {
                throw WavError("wav: unsupported channel count " + std::to_string(channels));
            }
            if (rate == 0) {
                throw WavError("wav: zero sample rate");
            }
            have_fmt = true;
        } else if (tag_is(b, at, "data")) {
            if (!have_fmt) {
                throw WavError("wav: data chunk before fmt chunk");
            }
            if (body + size > b.size()) {
                throw WavError("wav: truncated data chunk");
            }
            const std::size_t frame = 2u * channels;
            if (size == 0) {
                throw WavError("wav: empty data chunk");
            }
            if (size % frame != 0) {
                throw WavError("wav: data chunk is not a whole number of frames");
            }
            AudioClip clip;
            clip.sample_rate = rate;
            const std::size_t frames = size / frame;
            clip.samples.resize(frames);
            for (std::size_t f = 0; f < frames; ++f) {
                double acc = 0.0;
                for (std::size_t c = 0; c < channels; ++c) {
                    const auto raw = static_cast<std::int16_t>(read_u16(b, body + f * frame + 2 * c));
                    acc += static_cast<double>(raw) / 32768.0;
                }
                clip.samples[f] = acc / channels;
            }
            return clip;
        }
        at = body + size + (size & 1u);
    }
    throw WavError(have_fmt ? "wav: no data chunk" : "wav: no fmt chunk");
}

AudioClip load_wav(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return parse_wav(bytes);
    } catch (const WavError& e) {
        throw WavError(path.string() + ": " + e.what());
    }
}

std::vector<std::uint8_t> encode_wav(const AudioClip& clip) {
    clip.validate();
    const auto data_bytes = static_cast<std::uint32_t>(clip.samples.size() * 2);
    const auto rate = static_cast<std::uint32_t>(std::lround(clip.sample_rate));
    std::vector<std::uint8_t> out;
    out.reserve(44 + data_bytes);
    put_tag(out, "RIFF");
    put_u32(out, 36 + data_bytes);
    put_tag(out, "WAVE");
    put_tag(out, "fmt ");
    put_u32(out, 16);
    put_u16(out, 1);
    put_u16(out, 1);
    put_u32(out, rate);
    put_u32(out, rate * 2);
    put_u16(out, 2);
    put_u16(out, 16);
    put_tag(out, "data");
    put_u32(out, data_bytes);
    for (double s : clip.samples) {
        const double c = std::clamp(s, -1.0, 1.0);
        put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(std::lround(c * 32767.0))));
    }
    return out;
}

void save_wav(const std::filesystem::path& path, const AudioClip& clip) {
    const auto bytes = encode_wav(clip);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

void fft_inplace(std::span<std::complex<double>> data, bool inverse) {
    const std::size_t n = data.size();
    if (n == 0 || !std::has_single_bit(n)) {
        throw DomainError("fft: size must be a power of two");
    }
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) {
            j ^= bit;
        }
        j ^= bit;
        if (i < j) {
            std::swap(data[i], data[j]);
        }
    }
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const std::complex<double> w = std::polar(1.0, sign * kTwoPi * static_cast<double>(k) / len);
                const std::complex<double> u = data[i + k];
                const std::complex<double> v = data[i + k + half] * w;
                data[i + k] = u + v;
                data[i + k + half] = u - v;
            }
        }
    }
    if (inverse) {
        for (auto& z : data) {
            z /= static_cast<double>(n);
        }
    }
}

SpectralPattern power_spectrum(const AudioClip& clip, std::size_t fft_size) {
    clip.validate();
    if (fft_size < 2 || !std::has_single_bit(fft_size)) {
        throw DomainError("power_spectrum: fft size must be a power of two >= 2");
    }
    if (fft_size > clip.samples.size()) {
        throw DomainError("power_spectrum: fft size exceeds clip length");
    }
    std::vector<std::complex<double>> buf(clip.samples.begin(), clip.samples.begin() + static_cast<long>(fft_size));
    fft_inplace(buf);
    SpectralPattern spec;
    spec.bin_hz = clip.sample_rate / static_cast<double>(fft_size);
    spec.power.resize(fft_size / 2 + 1);
    for (std::size_t k = 0; k < spec.power.size(); ++k) {
        spec.power[k] = std::norm(buf[k]);
    }
    spec.cutoff_bin = spec.power.size();
    return spec;
}

void apply_cutoff(SpectralPattern& spec, double cutoff_hz) {
    if (!(cutoff_hz > 0.0)) {
        throw DomainError("cutoff frequency must be positive");
    }
    const auto bin = static_cast<std::size_t>(std::ceil(cutoff_hz / spec.bin_hz - 1e-9));
    spec.cutoff_bin = std::min(bin, spec.power.size());
}

Pattern to_pattern(const SpectralPattern& spec, std::size_t n, double tau, double beta) {
    if (spec.cutoff_bin > spec.power.size()) {
        throw DomainError("to_pattern: cutoff bin beyond spectrum");
    }
    const std::span<const double> kept(spec.power.data(), spec.cutoff_bin);
    if (std::all_of(kept.begin(), kept.end(), [](double p) { return p == 0.0; })) {
        throw DomainError("to_pattern: spectrum is zero below the cutoff");
    }
    return scale_to_pattern(kept, n, tau, beta);
}

Pattern raw_pattern(const AudioClip& clip, std::size_t n, double tau, double beta) {
    clip.validate();
    return scale_to_pattern(std::span(clip.samples).first(std::min(n, clip.samples.size())), n, tau, beta);
}

void add_noise(AudioClip& clip, double snr_db, std::uint64_t seed) {
    double power = 0.0;
    for (double s : clip.samples) {
        power += s * s;
    }
    power /= static_cast<double>(clip.samples.size());
    const double sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    for (double& s : clip.samples) {
        s += noise(rng);
    }
}

AudioClip synthesize(const SignalKind& kind, double duration, double sample_rate, std::uint64_t seed) {
    if (!(sample_rate > 0.0) || !(duration > 0.0)) {
        throw DomainError("synthesize: duration and sample rate must be positive");
    }
    const double nyquist = sample_rate / 2.0;
    std::vector<Tone> tones;
    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, Sine>) {
                tones.push_back({k.freq, k.amp, k.phase});
            } else if constexpr (std::is_same_v<K, MultiTone>) {
                tones = k.tones;
            } else {
                tones.push_back({k.freq, k.amp, 0.0});
            }
        },
        kind);
    if (tones.empty()) {
        throw DomainError("synthesize: no tones");
    }
    for (const auto& t : tones) {
        if (!(t.freq >= 0.0) || !(t.freq < nyquist)) {
            throw DomainError("synthesize: frequency " + std::to_string(t.freq) + " Hz aliases at sample rate " +
                              std::to_string(sample_rate));
        }
    }
    AudioClip clip;
    clip.sample_rate = sample_rate;
    const auto count = static_cast<std::size_t>(std::llround(duration * sample_rate));
    clip.samples.assign(count, 0.0);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / sample_rate;
        double s = 0.0;
        for (const auto& tone : tones) {
            s += tone.amp * std::sin(kTwoPi * tone.freq * t + tone.phase);
        }
        clip.samples[i] = s;
    }
    if (const auto* ns = std::get_if<NoisySine>(&kind)) {
        add_noise(clip, ns->snr_db, seed);
    }
    double peak = 0.0;
    for (double s : clip.samples) {
        peak = std::max(peak, std::abs(s));
    }
    if (peak > 1.0) {
        for (double& s : clip.samples) {
            s /= peak;
        }
    }
    return clip;
}

}  // namespace ringosc
