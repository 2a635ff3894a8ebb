#include "songsieve/augment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "songsieve/csv.hpp"
#include "songsieve/error.hpp"

namespace songsieve {

namespace {

std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

double signal_power(const std::vector<double>& samples) {
    double acc = 0.0;
    for (double s : samples) acc += s * s;
    return samples.empty() ? 0.0 : acc / static_cast<double>(samples.size());
}

}  // namespace

AudioClip add_noise(const AudioClip& clip, double snr_db, std::uint64_t seed) {
    if (std::isinf(snr_db) && snr_db > 0.0) return clip;
    const double power = signal_power(clip.samples);
    if (power <= 0.0) throw error(errc::silent_clip, "SNR is undefined for a silent clip");

    const double noise_power = power / std::pow(10.0, snr_db / 10.0);
    const double sigma = std::sqrt(noise_power);
    AudioClip out = clip;
    Rng rng(seed);
    for (double& s : out.samples) s = std::clamp(s + sigma * rng.gaussian(), -1.0, 1.0);
    return out;
}

AudioClip scale_intensity(const AudioClip& clip, double gain_db) {
    const double gain = std::pow(10.0, gain_db / 20.0);
    AudioClip out = clip;
    for (double& s : out.samples) s = std::clamp(s * gain, -1.0, 1.0);
    return out;
}

std::vector<BackgroundItem> mix_background_set(long n_train,
                                               const std::vector<BackgroundItem>& background_items,
                                               const AugmentConfig& config) {
    if (n_train <= 0) throw error(errc::empty_input, "n_train must be positive");
    const double f = config.background_fraction;
    if (f < 0.0 || f >= 1.0) throw error(errc::invalid_config, "background fraction must lie in [0,1)");

    std::vector<std::string> exclusions;
    exclusions.reserve(config.excluded_background_labels.size());
    for (const std::string& e : config.excluded_background_labels) exclusions.push_back(to_lower(e));

    std::vector<BackgroundItem> pool;
    for (const BackgroundItem& item : background_items) {
        const std::string label = to_lower(item.label);
        const bool excluded = std::any_of(exclusions.begin(), exclusions.end(), [&](const std::string& e) {
            return !e.empty() && label.find(e) != std::string::npos;
        });
        if (!excluded) pool.push_back(item);
    }

    // b/(n+b) = f  =>  b = f*n/(1-f)
    const long b = std::lround(f * static_cast<double>(n_train) / (1.0 - f));
    if (b == 0) return {};
    if (b > static_cast<long>(pool.size()))
        throw error(errc::insufficient_background_items,
                    "need " + std::to_string(b) + " items but only " + std::to_string(pool.size()) +
                        " remain after exclusions");

    // seeded partial Fisher-Yates: sample b without replacement
    Rng rng(config.seed);
    std::vector<BackgroundItem> selection;
    selection.reserve(static_cast<std::size_t>(b));
    for (long i = 0; i < b; ++i) {
        const std::size_t j = static_cast<std::size_t>(i) +
                              static_cast<std::size_t>(rng.below(pool.size() - static_cast<std::size_t>(i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
        selection.push_back(pool[static_cast<std::size_t>(i)]);
    }
    return selection;
}

AudioClip tile_to_duration(const AudioClip& clip, double target_duration_s, double crossfade_s) {
    if (clip.samples.empty() || clip.sample_rate_hz <= 0)
        throw error(errc::empty_audio, "cannot tile an empty clip");
    const std::size_t target =
        static_cast<std::size_t>(std::llround(target_duration_s * clip.sample_rate_hz));

    AudioClip out;
    out.sample_rate_hz = clip.sample_rate_hz;
    out.source_id = clip.source_id;

    if (clip.samples.size() >= target) {
        out.samples.assign(clip.samples.begin(), clip.samples.begin() + static_cast<long>(target));
        return out;
    }

    const std::size_t fade =
        std::min(static_cast<std::size_t>(std::llround(crossfade_s * clip.sample_rate_hz)),
                 clip.samples.size() / 2);
    out.samples = clip.samples;
    while (out.samples.size() < target) {
        const std::size_t splice = out.samples.size() - fade;
        // equal-gain linear crossfade from tail into head of the next repeat
        for (std::size_t i = 0; i < fade; ++i) {
            const double t = fade > 0 ? static_cast<double>(i) / static_cast<double>(fade) : 1.0;
            out.samples[splice + i] = out.samples[splice + i] * (1.0 - t) + clip.samples[i] * t;
        }
        out.samples.insert(out.samples.end(), clip.samples.begin() + static_cast<long>(fade),
                           clip.samples.end());
    }
    out.samples.resize(target);
    for (double& s : out.samples) s = std::clamp(s, -1.0, 1.0);
    return out;
}

std::vector<BackgroundItem> read_background_metadata(const std::string& path) {
    const std::vector<csv::Row> rows = csv::read_file(path);
    if (rows.empty()) throw error(errc::malformed_row, path + ": empty metadata CSV");
    const csv::Row& header = rows.front();
    std::size_t file_col = header.size(), label_col = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string name = to_lower(header[i]);
        if (name == "filename") file_col = i;
        if (name == "label" || name == "category") label_col = i;
    }
    if (file_col == header.size() || label_col == header.size())
        throw error(errc::malformed_row, path + ": need 'filename' and 'label'/'category' columns");

    std::vector<BackgroundItem> items;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const csv::Row& row = rows[i];
        if (row.size() <= std::max(file_col, label_col))
            throw error(errc::malformed_row, path + ":" + std::to_string(i + 1) + ": short row");
        items.push_back({row[file_col], row[label_col]});
    }
    return items;
}

}  // namespace songsieve
