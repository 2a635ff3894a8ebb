#include "songsieve/spectrogram.hpp"

#include <fftw3.h>
#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <mutex>

#include "json.hpp"
#include "songsieve/error.hpp"

namespace songsieve {

namespace {

constexpr double kPi = 3.14159265358979323846;

// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}

std::vector<double> make_window(const std::string& name, int n) {
    std::vector<double> w(static_cast<std::size_t>(n));
    if (name == "hann") {
        for (int i = 0; i < n; ++i) w[i] = 0.5 * (1.0 - std::cos(2.0 * kPi * i / n));
    } else if (name == "rect" || name == "rectangular") {
        std::fill(w.begin(), w.end(), 1.0);
    } else {
        throw error(errc::invalid_config, "unknown window '" + name + "'");
    }
    return w;
}

double effective_fmin(const SpectrogramParams& params, double bin_width_hz) {
    // the configured 1 Hz minimum lies below the first STFT bin; clamp up so
    // the log mapping never hits frequency zero
    return std::max({params.fmin_hz, bin_width_hz, 1.0});
}

}  // namespace

SpectrogramMatrix compute_stft_db(const AudioClip& clip, const SpectrogramParams& params) {
    if (params.n_fft <= 0 || params.hop <= 0 || params.hop > params.n_fft)
        throw error(errc::invalid_config, "need n_fft >= hop > 0");
    const std::size_t n = clip.samples.size();
    const std::size_t n_fft = static_cast<std::size_t>(params.n_fft);
    if (n < n_fft) throw error(errc::clip_too_short, "clip shorter than one analysis window");

    const std::size_t n_frames = (n - n_fft) / params.hop + 1;
    const std::size_t n_bins = n_fft / 2 + 1;
    const std::vector<double> window = make_window(params.window, params.n_fft);

    std::vector<double> in(n_fft);
    std::vector<fftw_complex> out(n_bins);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        plan = fftw_plan_dft_r2c_1d(params.n_fft, in.data(), out.data(), FFTW_ESTIMATE);
    }

    SpectrogramMatrix matrix;
    matrix.values.assign(n_frames, std::vector<double>(n_bins, 0.0));
    matrix.frame_times_s.resize(n_frames);
    matrix.bin_freqs_hz.resize(n_bins);
    for (std::size_t k = 0; k < n_bins; ++k)
        matrix.bin_freqs_hz[k] = static_cast<double>(k) * clip.sample_rate_hz / params.n_fft;

    double max_mag = 0.0;
    for (std::size_t f = 0; f < n_frames; ++f) {
        const std::size_t start = f * params.hop;
        matrix.frame_times_s[f] = (start + n_fft / 2.0) / clip.sample_rate_hz;
        for (std::size_t i = 0; i < n_fft; ++i) in[i] = clip.samples[start + i] * window[i];
        fftw_execute(plan);
        for (std::size_t k = 0; k < n_bins; ++k) {
            const double mag = std::hypot(out[k][0], out[k][1]);
            matrix.values[f][k] = mag;
            max_mag = std::max(max_mag, mag);
        }
    }
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fftw_destroy_plan(plan);
    }

    // 20*log10(|X|/max), floored; digital silence floors everything
    for (auto& frame : matrix.values) {
        for (double& v : frame) {
            if (max_mag <= 0.0 || v <= 0.0) {
                v = params.db_floor;
            } else {
                v = std::max(params.db_floor, 20.0 * std::log10(v / max_mag));
            }
        }
    }
    return matrix;
}

double row_center_frequency_hz(const SpectrogramParams& params, int sample_rate_hz, int row) {
    const double bin_width = static_cast<double>(sample_rate_hz) / params.n_fft;
    const double fmin = effective_fmin(params, bin_width);
    const double fmax = std::min(params.fmax_hz, sample_rate_hz / 2.0);
    const int h = params.out_height_px;
    if (h == 1) return fmax;
    const double t = static_cast<double>(h - 1 - row) / (h - 1);
    return fmin * std::pow(fmax / fmin, t);
}

SpectrogramImage render_log_spectrogram(const SpectrogramMatrix& matrix,
                                        const SpectrogramParams& params, double duration_s,
                                        const std::string& source_id) {
    if (matrix.frames() == 0 || matrix.bins() < 2)
        throw error(errc::empty_input, "cannot render an empty spectrogram matrix");
    if (params.out_width_px <= 0 || params.out_height_px <= 0)
        throw error(errc::invalid_config, "output geometry must be positive");

    const int w = params.out_width_px;
    const int h = params.out_height_px;
    const std::size_t n_frames = matrix.frames();
    const std::size_t n_bins = matrix.bins();
    const double bin_width = matrix.bin_freqs_hz[1] - matrix.bin_freqs_hz[0];
    const double t0 = matrix.frame_times_s.front();
    const double frame_step = n_frames > 1 ? matrix.frame_times_s[1] - matrix.frame_times_s[0] : 1.0;

    SpectrogramImage image;
    image.width = w;
    image.height = h;
    image.params = params;
    image.duration_s = duration_s;
    image.source_id = source_id;
    image.pixels.resize(static_cast<std::size_t>(w) * h);

    const double nyquist = matrix.bin_freqs_hz.back();
    const double fmin = effective_fmin(params, bin_width);
    const double fmax = std::min(params.fmax_hz, nyquist);
    if (fmin >= fmax) throw error(errc::invalid_config, "fmin must stay below fmax after clamping");

    // precompute fractional bin index per output row
    std::vector<double> row_bin(static_cast<std::size_t>(h));
    for (int r = 0; r < h; ++r) {
        const double t = h == 1 ? 1.0 : static_cast<double>(h - 1 - r) / (h - 1);
        const double freq = fmin * std::pow(fmax / fmin, t);
        row_bin[r] = std::clamp(freq / bin_width, 0.0, static_cast<double>(n_bins - 1));
    }

    const double scale = 255.0 / (0.0 - params.db_floor);
    for (int c = 0; c < w; ++c) {
        const double t = (c + 0.5) / w * duration_s;
        double frame_pos = (t - t0) / frame_step;
        frame_pos = std::clamp(frame_pos, 0.0, static_cast<double>(n_frames - 1));
        const std::size_t f0 = static_cast<std::size_t>(frame_pos);
        const std::size_t f1 = std::min(f0 + 1, n_frames - 1);
        const double ft = frame_pos - f0;
        for (int r = 0; r < h; ++r) {
            const double bin_pos = row_bin[r];
            const std::size_t b0 = static_cast<std::size_t>(bin_pos);
            const std::size_t b1 = std::min(b0 + 1, n_bins - 1);
            const double bt = bin_pos - b0;
            const double db = (1.0 - ft) * ((1.0 - bt) * matrix.values[f0][b0] + bt * matrix.values[f0][b1]) +
                              ft * ((1.0 - bt) * matrix.values[f1][b0] + bt * matrix.values[f1][b1]);
            const double g = (db - params.db_floor) * scale;
            image.pixels[static_cast<std::size_t>(r) * w + c] =
                static_cast<std::uint8_t>(std::clamp(std::lround(g), 0L, 255L));
        }
    }
    return image;
}

namespace {

void put_u32be(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>((v >> 24) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>(v & 0xff));
}

void append_chunk(std::string& out, const char type[4], const std::string& body) {
    put_u32be(out, static_cast<std::uint32_t>(body.size()));
    const std::size_t crc_start = out.size();
    out.append(type, 4);
    out += body;
    const uLong crc = crc32(0L, reinterpret_cast<const Bytef*>(out.data() + crc_start),
                            static_cast<uInt>(out.size() - crc_start));
    put_u32be(out, static_cast<std::uint32_t>(crc));
}

std::string deflate_all(const std::string& raw) {
    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::string out(bound, '\0');
    if (compress2(reinterpret_cast<Bytef*>(out.data()), &bound,
                  reinterpret_cast<const Bytef*>(raw.data()), static_cast<uLong>(raw.size()),
                  Z_DEFAULT_COMPRESSION) != Z_OK)
        throw error(errc::io_failure, "deflate failed");
    out.resize(bound);
    return out;
}

}  // namespace

void write_png(const SpectrogramImage& image, const std::string& path) {
    if (image.width <= 0 || image.height <= 0 ||
        image.pixels.size() != static_cast<std::size_t>(image.width) * image.height)
        throw error(errc::empty_input, "image geometry does not match pixel count");

    // raw scanlines: filter byte 0 + one row of gray values
    std::string raw;
    raw.reserve(static_cast<std::size_t>(image.height) * (image.width + 1));
    for (int r = 0; r < image.height; ++r) {
        raw.push_back('\0');
        raw.append(reinterpret_cast<const char*>(image.pixels.data() + static_cast<std::size_t>(r) * image.width),
                   static_cast<std::size_t>(image.width));
    }

    std::string ihdr;
    put_u32be(ihdr, static_cast<std::uint32_t>(image.width));
    put_u32be(ihdr, static_cast<std::uint32_t>(image.height));
    ihdr.push_back(8);     // bit depth
    ihdr.push_back(0);     // color type: grayscale
    ihdr.push_back(0);     // compression
    ihdr.push_back(0);     // filter
    ihdr.push_back(0);     // no interlace

    std::string png("\x89PNG\r\n\x1a\n", 8);
    append_chunk(png, "IHDR", ihdr);
    append_chunk(png, "IDAT", deflate_all(raw));
    append_chunk(png, "IEND", "");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw error(errc::io_failure, "cannot write " + path);
    out.write(png.data(), static_cast<std::streamsize>(png.size()));
}

void write_sidecar(const SpectrogramImage& image, const std::string& path) {
    nlohmann::json j{
        {"source_id", image.source_id},
        {"duration_s", image.duration_s},
        {"width_px", image.width},
        {"height_px", image.height},
        {"params",
         {{"n_fft", image.params.n_fft},
          {"hop", image.params.hop},
          {"window", image.params.window},
          {"fmin_hz", image.params.fmin_hz},
          {"fmax_hz", image.params.fmax_hz},
          {"db_floor", image.params.db_floor},
          {"out_width_px", image.params.out_width_px},
          {"out_height_px", image.params.out_height_px}}},
    };
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error(errc::io_failure, "cannot write " + path);
    out << j.dump(2) << '\n';
}

std::pair<int, int> read_png_dimensions(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error(errc::io_failure, "cannot open " + path);
    unsigned char header[24];
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    if (in.gcount() != sizeof(header) || std::memcmp(header, "\x89PNG\r\n\x1a\n", 8) != 0 ||
        std::memcmp(header + 12, "IHDR", 4) != 0)
        throw error(errc::malformed_header, path + " is not a PNG");
    const auto be32 = [](const unsigned char* p) {
        return static_cast<int>((p[0] << 24) | (p[1] << 16) | (p[2] << 8) | p[3]);
    };
    return {be32(header + 16), be32(header + 20)};
}

}  // namespace songsieve
