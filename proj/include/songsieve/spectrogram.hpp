#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "songsieve/audio.hpp"

namespace songsieve {

/// STFT and rendering parameters. The defaults reproduce the detector input
/// geometry: 930x462 px, 1 Hz - 16 kHz on a log frequency axis.
struct SpectrogramParams {
    int n_fft = 2048;
    int hop = 512;
    std::string window = "hann";
    double fmin_hz = 1.0;
    double fmax_hz = 16000.0;
    double db_floor = -80.0;
    int out_width_px = 930;
    int out_height_px = 462;
};

/// dB-scaled STFT magnitudes: frames x bins, self-normalized so the loudest
/// cell is 0 dB and everything is floored at db_floor.
struct SpectrogramMatrix {
    std::vector<std::vector<double>> values;  // [frame][bin]
    std::vector<double> frame_times_s;        // frame centers
    std::vector<double> bin_freqs_hz;

    std::size_t frames() const { return values.size(); }
    std::size_t bins() const { return values.empty() ? 0 : values.front().size(); }
};

/// Fixed-geometry 8-bit grayscale render. Row 0 is the highest frequency;
/// columns map linearly onto [0, duration_s].
struct SpectrogramImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // row-major, height x width
    SpectrogramParams params;
    double duration_s = 0.0;
    std::string source_id;

    std::uint8_t at(int row, int col) const {
        return pixels[static_cast<std::size_t>(row) * width + col];
    }
};

/// Hann-windowed STFT magnitude in dB relative to the clip's own maximum.
/// Frame count is floor((N - n_fft)/hop) + 1 (no padding).
///
/// Throws: ClipTooShort when the clip is shorter than one window.
SpectrogramMatrix compute_stft_db(const AudioClip& clip, const SpectrogramParams& params);

/// Resample the matrix onto the output raster: log-uniform frequency rows
/// between fmin and fmax (fmin clamped up to the first positive STFT bin),
/// exactly out_width_px columns spanning [0, duration_s], bilinear
/// interpolation, dB mapped linearly to gray with db_floor -> 0.
SpectrogramImage render_log_spectrogram(const SpectrogramMatrix& matrix,
                                        const SpectrogramParams& params, double duration_s,
                                        const std::string& source_id = "");

/// Center frequency of image row `row` under the log mapping used by
/// render_log_spectrogram (row 0 = fmax, row H-1 = fmin).
double row_center_frequency_hz(const SpectrogramParams& params, int sample_rate_hz, int row);

/// Write the image as an 8-bit grayscale PNG.
void write_png(const SpectrogramImage& image, const std::string& path);

/// Write the sidecar JSON (params, duration, source_id) next to an image.
void write_sidecar(const SpectrogramImage& image, const std::string& path);

/// Read width/height from a PNG file's IHDR chunk.
std::pair<int, int> read_png_dimensions(const std::string& path);

}  // namespace songsieve
