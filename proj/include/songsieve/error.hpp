#pragma once

#include <stdexcept>
#include <string>

namespace songsieve {

/// Error categories raised by the toolkit. Each value maps to one failure
/// mode named in the module contracts; tests match on the code, not the text.
enum class errc {
    // audio_io
    malformed_header,
    unsupported_encoding,
    empty_audio,
    burst_out_of_range,
    // annotations / file formats
    malformed_row,
    dangling_frequency_row,
    unknown_label,
    out_of_range,
    coordinate_out_of_range,
    confidence_out_of_range,
    // split
    empty_input,
    // augment
    silent_clip,
    insufficient_background_items,
    // spectrogram / detect
    clip_too_short,
    duration_unknown,
    // evaluate
    division_by_zero,
    no_annotations,
    unknown_class,
    // calibrate
    degenerate_data,
    non_monotone_model,
    // cli / config
    invalid_config,
    io_failure,
};

const char* errc_name(errc code) noexcept;

class error : public std::runtime_error {
public:
    error(errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

}  // namespace songsieve
