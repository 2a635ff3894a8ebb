#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "songsieve/rng.hpp"

namespace songsieve {

/// Mono PCM clip, the unit all signal-processing stages operate on.
/// Samples are amplitudes in [-1, 1]; the field-recorder rate is 32 kHz.
struct AudioClip {
    std::vector<double> samples;
    int sample_rate_hz = 0;
    std::string source_id;

    double duration_s() const {
        return sample_rate_hz > 0 ? static_cast<double>(samples.size()) / sample_rate_hz : 0.0;
    }
};

/// One synthetic tone burst: a sine of `freq_hz` at `amplitude` over
/// [start_s, end_s).
struct ToneBurst {
    double start_s = 0.0;
    double end_s = 0.0;
    double freq_hz = 0.0;
    double amplitude = 0.0;
};

/// Read a RIFF WAV file (PCM 8/16/24/32-bit int or 32-bit float, 1-2
/// channels). Stereo is downmixed by channel mean; integer formats scale to
/// [-1, 1]. source_id is the file stem.
///
/// Throws: MalformedHeader, UnsupportedEncoding, EmptyAudio.
AudioClip load_wav(const std::string& path);

/// Write the clip as 16-bit PCM WAV (the canonical interchange format).
/// Samples are clamped to [-1, 1] before quantization.
void write_wav(const AudioClip& clip, const std::string& path);

/// Band-limited rate conversion with a 64-tap Kaiser-windowed sinc kernel,
/// cutoff at the lower of the two Nyquist frequencies. Duration is preserved
/// within one output-sample period. target == source returns the clip as-is.
AudioClip resample(const AudioClip& clip, int target_rate_hz);

/// Render tone bursts plus an optional white-noise floor into a clip.
/// Deterministic for a given seed. Bursts must lie inside [0, duration_s]
/// and amplitudes must be non-negative.
///
/// Throws: BurstOutOfRange.
AudioClip synth_clip(const std::vector<ToneBurst>& bursts, double noise_floor_amplitude,
                     double duration_s, int sample_rate_hz,
                     std::uint64_t seed = kDefaultSeed,
                     const std::string& source_id = "synth");

}  // namespace songsieve
