#pragma once

// Audio front end: PCM16 WAV I/O, radix-2 FFT power spectra and the mapping
// from spectra to firing-time patterns.

#include <complex>
#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "ringosc/pattern_codec.hpp"

namespace ringosc {

struct AudioClip {
    double sample_rate = 0.0;
    std::vector<double> samples;  // mono, [-1, 1]

    void validate() const;
    [[nodiscard]] double duration() const { return static_cast<double>(samples.size()) / sample_rate; }
};

/// Malformed or unsupported WAV data.
class WavError : public IoError {
public:
    using IoError::IoError;
};

/// Parses RIFF/WAVE PCM 16-bit, mono or stereo (channels averaged).
AudioClip parse_wav(std::span<const std::uint8_t> bytes);
AudioClip load_wav(const std::filesystem::path& path);

/// Mono PCM16 encoding; samples clipped to [-1, 1] and scaled by 32767.
std::vector<std::uint8_t> encode_wav(const AudioClip& clip);
void save_wav(const std::filesystem::path& path, const AudioClip& clip);

/// In-place iterative radix-2 decimation-in-time FFT. Size must be a power of two.
void fft_inplace(std::span<std::complex<double>> data, bool inverse = false);

struct SpectralPattern {
    double bin_hz = 0.0;
    std::vector<double> power;  // |X_k|^2 for k = 0..fft_size/2
    std::size_t cutoff_bin = 0; // bins [0, cutoff_bin) are kept by to_pattern
};

/// Power spectrum of the first fft_size samples (rectangular window).
SpectralPattern power_spectrum(const AudioClip& clip, std::size_t fft_size);

/// Sets cutoff_bin to the first bin at or above cutoff_hz (clamped to the spectrum length).
void apply_cutoff(SpectralPattern& spec, double cutoff_hz);

/// Truncates to the cutoff, averages contiguous bins down to n sites and scales
/// affinely (minimum 0) so that the largest cyclic forward difference equals
/// beta * tau. Throws DomainError when the averaged sites are all equal
/// (an all-zero spectrum, for instance).
Pattern to_pattern(const SpectralPattern& spec, std::size_t n, double tau, double beta);

/// Raw-waveform pattern: the first n samples under the same affine scaling.
Pattern raw_pattern(const AudioClip& clip, std::size_t n, double tau, double beta);

struct Tone {
    double freq = 0.0;
    double amp = 1.0;
    double phase = 0.0;
};

struct Sine {
    double freq = 0.0;
    double amp = 1.0;
    double phase = 0.0;
};
struct MultiTone {
    std::vector<Tone> tones;
};
struct NoisySine {
    double freq = 0.0;
    double snr_db = 20.0;
    double amp = 1.0;
};
using SignalKind = std::variant<Sine, MultiTone, NoisySine>;

/// Deterministic test signal; the noise of NoisySine comes from a generator seeded with `seed`.
AudioClip synthesize(const SignalKind& kind, double duration, double sample_rate, std::uint64_t seed = 0);

/// Adds white Gaussian noise at the given signal-to-noise ratio (dB, power).
void add_noise(AudioClip& clip, double snr_db, std::uint64_t seed);

}  // namespace ringosc
