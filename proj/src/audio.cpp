#include "songsieve/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "songsieve/error.hpp"

namespace songsieve {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::uint32_t read_u32le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16le(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32le(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_u16le(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
}

// WAVE format tags we accept.
constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

double decode_sample(const unsigned char* p, std::uint16_t bits, std::uint16_t format_tag) {
    if (format_tag == kFormatFloat) {
        float v;
        std::memcpy(&v, p, 4);
        // corrupt float data must not leak NaN/Inf into the pipeline
        if (!std::isfinite(v)) return 0.0;
        return std::clamp(static_cast<double>(v), -1.0, 1.0);
    }
    switch (bits) {
        case 8:
            // 8-bit WAV is unsigned with 128 as the zero line
            return (static_cast<int>(p[0]) - 128) / 128.0;
        case 16: {
            const std::int16_t v = static_cast<std::int16_t>(p[0] | (p[1] << 8));
            return v / 32768.0;
        }
        case 24: {
            std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
            if (v & 0x800000) v |= ~0xFFFFFF;
            return v / 8388608.0;
        }
        case 32: {
            std::int32_t v;
            std::memcpy(&v, p, 4);
            return v / 2147483648.0;
        }
        default:
            throw error(errc::unsupported_encoding, "unsupported bit depth " + std::to_string(bits));
    }
}

double kaiser_bessel_i0(double x) {
    // Power-series modified Bessel I0; converges fast for the betas used here.
    double sum = 1.0;
    double term = 1.0;
    for (int k = 1; k < 32; ++k) {
        term *= (x / (2.0 * k)) * (x / (2.0 * k));
        sum += term;
        if (term < 1e-16 * sum) break;
    }
    return sum;
}

double sinc(double x) {
    if (std::abs(x) < 1e-12) return 1.0;
    return std::sin(kPi * x) / (kPi * x);
}

}  // namespace

AudioClip load_wav(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error(errc::io_failure, "cannot open " + path);
    std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto* data = reinterpret_cast<const unsigned char*>(raw.data());
    const std::size_t size = raw.size();

    if (size < 12 || std::memcmp(data, "RIFF", 4) != 0 || std::memcmp(data + 8, "WAVE", 4) != 0)
        throw error(errc::malformed_header, path + " is not a RIFF WAVE file");

    std::uint16_t format_tag = 0, channels = 0, bits = 0;
    std::uint32_t sample_rate = 0;
    const unsigned char* pcm = nullptr;
    std::uint32_t pcm_bytes = 0;

    std::size_t pos = 12;
    while (pos + 8 <= size) {
        const std::uint32_t chunk_size = read_u32le(data + pos + 4);
        const unsigned char* body = data + pos + 8;
        if (pos + 8 + chunk_size > size)
            throw error(errc::malformed_header, "truncated chunk in " + path);
        if (std::memcmp(data + pos, "fmt ", 4) == 0) {
            if (chunk_size < 16) throw error(errc::malformed_header, "fmt chunk too small");
            format_tag = read_u16le(body);
            channels = read_u16le(body + 2);
            sample_rate = read_u32le(body + 4);
            bits = read_u16le(body + 14);
            if (format_tag == kFormatExtensible) {
                // actual format lives in the first two bytes of the SubFormat GUID
                if (chunk_size < 40) throw error(errc::malformed_header, "extensible fmt chunk too small");
                format_tag = read_u16le(body + 24);
            }
        } else if (std::memcmp(data + pos, "data", 4) == 0) {
            pcm = body;
            pcm_bytes = chunk_size;
        }
        pos += 8 + chunk_size + (chunk_size & 1);  // chunks are word-aligned
    }

    if (format_tag == 0 || sample_rate == 0) throw error(errc::malformed_header, "missing fmt chunk in " + path);
    if (format_tag != kFormatPcm && format_tag != kFormatFloat)
        throw error(errc::unsupported_encoding, "compressed or unknown WAV format tag " + std::to_string(format_tag));
    if (format_tag == kFormatFloat && bits != 32)
        throw error(errc::unsupported_encoding, "only 32-bit float WAV is supported");
    if (channels < 1 || channels > 2)
        throw error(errc::unsupported_encoding, std::to_string(channels) + "-channel WAV is not supported");
    if (pcm == nullptr || pcm_bytes == 0) throw error(errc::empty_audio, path + " has no audio data");

    const std::size_t bytes_per_sample = bits / 8;
    const std::size_t frame_bytes = bytes_per_sample * channels;
    if (bits % 8 != 0 || frame_bytes == 0) throw error(errc::unsupported_encoding, "bad bit depth");
    const std::size_t frames = pcm_bytes / frame_bytes;
    if (frames == 0) throw error(errc::empty_audio, path + " has no audio frames");

    AudioClip clip;
    clip.sample_rate_hz = static_cast<int>(sample_rate);
    clip.source_id = std::filesystem::path(path).stem().string();
    clip.samples.resize(frames);
    for (std::size_t f = 0; f < frames; ++f) {
        const unsigned char* frame = pcm + f * frame_bytes;
        double acc = 0.0;
        for (std::uint16_t c = 0; c < channels; ++c)
            acc += decode_sample(frame + c * bytes_per_sample, bits, format_tag);
        clip.samples[f] = acc / channels;
    }
    return clip;
}

void write_wav(const AudioClip& clip, const std::string& path) {
    if (clip.sample_rate_hz <= 0) throw error(errc::empty_audio, "clip has no sample rate");
    const std::uint32_t n = static_cast<std::uint32_t>(clip.samples.size());
    const std::uint32_t data_bytes = n * 2;

    std::string out;
    out.reserve(44 + data_bytes);
    out += "RIFF";
    put_u32le(out, 36 + data_bytes);
    out += "WAVEfmt ";
    put_u32le(out, 16);
    put_u16le(out, kFormatPcm);
    put_u16le(out, 1);  // mono
    put_u32le(out, static_cast<std::uint32_t>(clip.sample_rate_hz));
    put_u32le(out, static_cast<std::uint32_t>(clip.sample_rate_hz) * 2);
    put_u16le(out, 2);
    put_u16le(out, 16);
    out += "data";
    put_u32le(out, data_bytes);
    for (double s : clip.samples) {
        const double clamped = std::clamp(s, -1.0, 1.0);
        const long q = std::lround(clamped * 32768.0);
        const std::int16_t v = static_cast<std::int16_t>(std::clamp<long>(q, -32768, 32767));
        put_u16le(out, static_cast<std::uint16_t>(v));
    }

    std::ofstream file(path, std::ios::binary);
    if (!file) throw error(errc::io_failure, "cannot write " + path);
    file.write(out.data(), static_cast<std::streamsize>(out.size()));
}

AudioClip resample(const AudioClip& clip, int target_rate_hz) {
    if (target_rate_hz <= 0) throw error(errc::out_of_range, "target rate must be positive");
    if (target_rate_hz == clip.sample_rate_hz) return clip;
    if (clip.samples.empty()) throw error(errc::empty_audio, "cannot resample an empty clip");

    const double ratio = static_cast<double>(target_rate_hz) / clip.sample_rate_hz;
    // cutoff at the lower Nyquist; when downsampling the kernel widens by 1/scale
    const double scale = std::min(1.0, ratio);
    constexpr int kHalfTaps = 32;  // 64-tap kernel
    constexpr double kKaiserBeta = 8.6;
    const double half_width = kHalfTaps / scale;
    const double i0_beta = kaiser_bessel_i0(kKaiserBeta);

    const std::size_t n_in = clip.samples.size();
    const std::size_t n_out = static_cast<std::size_t>(std::llround(static_cast<double>(n_in) * ratio));

    AudioClip out;
    out.sample_rate_hz = target_rate_hz;
    out.source_id = clip.source_id;
    out.samples.resize(n_out);

    for (std::size_t j = 0; j < n_out; ++j) {
        const double center = static_cast<double>(j) / ratio;  // position in input samples
        const long lo = static_cast<long>(std::ceil(center - half_width));
        const long hi = static_cast<long>(std::floor(center + half_width));
        double acc = 0.0;
        for (long k = std::max(lo, 0L); k <= std::min<long>(hi, static_cast<long>(n_in) - 1); ++k) {
            const double x = (k - center) * scale;
            const double window_arg = (k - center) / half_width;
            const double w = kaiser_bessel_i0(kKaiserBeta * std::sqrt(std::max(0.0, 1.0 - window_arg * window_arg))) / i0_beta;
            acc += clip.samples[static_cast<std::size_t>(k)] * scale * sinc(x) * w;
        }
        out.samples[j] = acc;
    }
    return out;
}

AudioClip synth_clip(const std::vector<ToneBurst>& bursts, double noise_floor_amplitude,
                     double duration_s, int sample_rate_hz, std::uint64_t seed,
                     const std::string& source_id) {
    if (sample_rate_hz <= 0 || duration_s <= 0.0)
        throw error(errc::out_of_range, "duration and sample rate must be positive");
    for (const ToneBurst& b : bursts) {
        if (b.start_s < 0.0 || b.end_s > duration_s || b.start_s >= b.end_s)
            throw error(errc::burst_out_of_range, "burst outside [0, duration]");
        if (b.amplitude < 0.0) throw error(errc::burst_out_of_range, "negative burst amplitude");
    }

    const std::size_t n = static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
    AudioClip clip;
    clip.sample_rate_hz = sample_rate_hz;
    clip.source_id = source_id;
    clip.samples.assign(n, 0.0);

    if (noise_floor_amplitude > 0.0) {
        Rng rng(seed);
        for (std::size_t i = 0; i < n; ++i)
            clip.samples[i] = noise_floor_amplitude * rng.gaussian();
    }
    for (const ToneBurst& b : bursts) {
        const std::size_t first = static_cast<std::size_t>(std::llround(b.start_s * sample_rate_hz));
        const std::size_t last = std::min(n, static_cast<std::size_t>(std::llround(b.end_s * sample_rate_hz)));
        for (std::size_t i = first; i < last; ++i) {
            const double t = static_cast<double>(i) / sample_rate_hz - b.start_s;
            clip.samples[i] += b.amplitude * std::sin(2.0 * kPi * b.freq_hz * t);
        }
    }
    for (double& s : clip.samples) s = std::clamp(s, -1.0, 1.0);
    return clip;
}

}  // namespace songsieve
