#include "songsieve/error.hpp"

namespace songsieve {

const char* errc_name(errc code) noexcept {
    switch (code) {
        case errc::malformed_header: return "MalformedHeader";
        case errc::unsupported_encoding: return "UnsupportedEncoding";
        case errc::empty_audio: return "EmptyAudio";
        case errc::burst_out_of_range: return "BurstOutOfRange";
        case errc::malformed_row: return "MalformedRow";
        case errc::dangling_frequency_row: return "DanglingFrequencyRow";
        case errc::unknown_label: return "UnknownLabel";
        case errc::out_of_range: return "OutOfRange";
        case errc::coordinate_out_of_range: return "CoordinateOutOfRange";
        case errc::confidence_out_of_range: return "ConfidenceOutOfRange";
        case errc::empty_input: return "EmptyInput";
        case errc::silent_clip: return "SilentClip";
        case errc::insufficient_background_items: return "InsufficientBackgroundItems";
        case errc::clip_too_short: return "ClipTooShort";
        case errc::duration_unknown: return "DurationUnknown";
        case errc::division_by_zero: return "DivisionByZero";
        case errc::no_annotations: return "NoAnnotations";
        case errc::unknown_class: return "UnknownClass";
        case errc::degenerate_data: return "DegenerateData";
        case errc::non_monotone_model: return "NonMonotoneModel";
        case errc::invalid_config: return "InvalidConfig";
        case errc::io_failure: return "IoFailure";
    }
    return "UnknownError";
}

}  // namespace songsieve
