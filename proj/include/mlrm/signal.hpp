#pragma once

// Raw-signal preparation: aligning a frame stream with an audio track,
// average-pool downscaling, pixel entropy, STFT spectrograms, and the
// resolution sweep that decides how far images can be shrunk before their
// entropy profile drifts.

#include <complex>
#include <cstdint>
#include <vector>

#include "mlrm/metrics.hpp"
#include "mlrm/types.hpp"

namespace mlrm {

struct ImageFrame {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;  // row-major
    double timestamp = 0.0;            // seconds

    std::size_t size() const { return width * height; }
};

struct AudioClip {
    std::vector<double> samples;
    double sample_rate = 0.0;  // Hz
    double start_time = 0.0;   // seconds

    double duration() const {
        return sample_rate > 0.0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
    }
};

struct VideoStream {
    std::vector<ImageFrame> frames;
    double nominal_rate = 0.0;  // frames per second
};

struct AlignedPair {
    std::size_t frame_index = 0;
    const ImageFrame* frame = nullptr;
    AudioClip snippet;
};

struct RegisterResult {
    std::vector<AlignedPair> pairs;
    std::size_t dropped = 0;       // frames without a full audio window
    std::size_t snippet_len = 0;   // samples per aligned window
};

// Pair every frame with the audio window [t, t + 1/rate) by index arithmetic:
// start = round((t - clip start) * sample_rate), length = round(sample_rate /
// frame rate). Frames whose window falls outside the clip are dropped and
// counted; fully disjoint streams are an error (NoOverlap).
RegisterResult register_streams(const VideoStream& video, const AudioClip& audio);

// Average pooling with k x k blocks; edge blocks shrink to the pixels that
// exist. Output pixels are round-half-up integer means; output dims are
// ceil(w/k) x ceil(h/k).
ImageFrame avg_pool_downscale(const ImageFrame& frame, std::size_t k);

// Entropy in bits of the 256-bin pixel histogram, in [0, 8].
double image_entropy(const ImageFrame& frame);

struct Spectrogram {
    std::size_t freq_bins = 0;  // rows
    std::size_t time_bins = 0;  // columns
    std::vector<double> values;

    double at(std::size_t f, std::size_t t) const { return values[f * time_bins + t]; }
};

// In-place radix-2 FFT; size must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& buf);

// Linear STFT magnitudes with a periodic Hann window: (window/2 + 1) rows,
// floor((n - window)/hop) + 1 columns. The clip must cover one full window
// (ClipTooShort); window must be a power of two >= 16.
Spectrogram stft_magnitudes(const AudioClip& clip, std::size_t window, std::size_t hop);

Spectrogram log_compress(const Spectrogram& spec);  // log(1 + v)

// Block-average resize to size x size; requires both input dims >= size.
Spectrogram resize_block_mean(const Spectrogram& spec, std::size_t size);

// log(1 + |STFT|) resized to out_size x out_size.
Spectrogram stft_spectrogram(const AudioClip& clip, std::size_t window, std::size_t hop,
                             std::size_t out_size);

// Min-max scale to u8 for entropy measurement (constant input maps to 0).
ImageFrame spectrogram_to_frame(const Spectrogram& spec);

struct SweepSizeStats {
    std::size_t size = 0;
    bool visual_available = false;
    double visual_mean = 0.0, visual_min = 0.0, visual_max = 0.0;
    bool audio_available = false;
    double audio_mean = 0.0, audio_min = 0.0, audio_max = 0.0;
    double drift = 0.0;  // |min(s) - min(ref)| / (|min(s)| + eps), visual
};

struct SweepStep {
    std::size_t from_size = 0, to_size = 0;
    double p_before = 0.0;  // visual min entropy at the smaller size
    double p_after = 0.0;   // at the larger size
    RedundancyScore score;  // lower-is-better redundancy of the added pixels
};

struct SweepResult {
    std::vector<SweepSizeStats> stats;   // per candidate size, ascending
    std::vector<SweepStep> steps;        // between adjacent available sizes
    std::size_t reference = 0;           // largest size with visual stats
    std::size_t recommended = 0;         // smallest size with drift <= tol
};

inline constexpr double kDefaultDriftTol = 0.20;

// Entropy sweep over candidate square sizes. A size is available visually
// when every frame pools to exactly size x size for some kernel, and for
// audio when every raw spectrogram is at least size x size. The
// recommendation is driven by the visual min-entropy drift against the
// largest available size.
SweepResult downscale_sweep(const std::vector<ImageFrame>& frames,
                            const std::vector<Spectrogram>& spectra,
                            const std::vector<std::size_t>& sizes,
                            double drift_tol = kDefaultDriftTol);

}  // namespace mlrm
