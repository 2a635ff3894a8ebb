#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "songsieve/audio.hpp"
#include "songsieve/rng.hpp"

namespace songsieve {

/// Sentinel SNR meaning "add no noise".
inline constexpr double kNoNoiseSnrDb = std::numeric_limits<double>::infinity();

/// Training-set augmentation policy: additive-noise SNR range, intensity-gain
/// range, and the target fraction of background-only items mixed in from the
/// external sound set.
struct AugmentConfig {
    double snr_db_min = 10.0;
    double snr_db_max = 30.0;
    double gain_db_min = -6.0;
    double gain_db_max = 6.0;
    double background_fraction = 0.25;
    std::vector<std::string> excluded_background_labels = {"bird"};
    std::uint64_t seed = kDefaultSeed;
};

/// An entry of the external background set (ESC-50-style directory plus
/// metadata row).
struct BackgroundItem {
    std::string filename;
    std::string label;
};

/// Add white Gaussian noise at the given SNR (signal power over noise power,
/// in dB). Deterministic per seed; output clamped to [-1, 1]. An SNR of
/// kNoNoiseSnrDb returns the clip unchanged.
///
/// Throws: SilentClip when the signal power is zero (SNR undefined).
AudioClip add_noise(const AudioClip& clip, double snr_db, std::uint64_t seed = kDefaultSeed);

/// Multiply samples by 10^(gain_db/20), clamped to [-1, 1].
AudioClip scale_intensity(const AudioClip& clip, double gain_db);

/// Choose background items so they make up `background_fraction` of the final
/// training set: b = round(f*n/(1-f)) items sampled without replacement after
/// dropping items whose label contains an excluded substring
/// (case-insensitive). Sampling is seeded and single-threaded.
///
/// Throws: InsufficientBackgroundItems.
std::vector<BackgroundItem> mix_background_set(long n_train,
                                               const std::vector<BackgroundItem>& background_items,
                                               const AugmentConfig& config);

/// Loop a short clip up to target_duration_s with an equal-gain linear
/// crossfade between repeats, or trim a long one. Used to turn 5 s background
/// clips into full-length negatives instead of zero-padding them.
AudioClip tile_to_duration(const AudioClip& clip, double target_duration_s,
                           double crossfade_s = 0.1);

/// Parse an ESC-50-style metadata CSV; accepts a `label` or `category`
/// column next to `filename`.
std::vector<BackgroundItem> read_background_metadata(const std::string& path);

}  // namespace songsieve
