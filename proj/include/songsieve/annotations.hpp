#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace songsieve {

/// Ground-truth event: a time span within one recording, an optional
/// frequency span, and a class label.
struct Annotation {
    std::string source_id;
    double start_s = 0.0;
    double end_s = 0.0;
    std::optional<double> fmin_hz;
    std::optional<double> fmax_hz;
    std::string label;
};

/// Label remapping policy. Binary mode collapses every bird-related label to
/// "Bird" and drops "No Bird" from the positive set; classifier mode removes
/// the general classes that overlap species-level ones.
struct LabelScheme {
    enum class Mode { binary, classifier };

    Mode mode = Mode::binary;
    std::set<std::string> keep;
    std::map<std::string, std::string> remap;
    std::set<std::string> dropped;

    /// Two-class detector scheme: everything except "No Bird" becomes "Bird".
    static LabelScheme binary();

    /// Species-classifier scheme over `classes`; `extra_dropped` is merged
    /// with the always-dropped general classes (Alaudidae, Bird,
    /// Fringillidae, Upupa epops).
    static LabelScheme classifier(const std::set<std::string>& classes,
                                  const std::set<std::string>& extra_dropped = {});

    /// Zero-based class index under the stable (lexicographic) ordering.
    int class_index(const std::string& label) const;

    /// Classes in index order, as persisted to classes.txt.
    std::vector<std::string> class_order() const;
};

/// Normalized detector box. For this pipeline the box always spans the full
/// frequency axis: y_center = 0.5, y_height = 1.
struct YoloBox {
    int class_idx = 0;
    double x_center = 0.0;
    double y_center = 0.5;
    double x_width = 0.0;
    double y_height = 1.0;
};

/// Parse an Audacity label-track export: tab-separated `start end label`
/// rows, each optionally followed by a `\ fmin fmax` frequency row that
/// attaches to the preceding label.
///
/// Throws: MalformedRow, DanglingFrequencyRow.
std::vector<Annotation> parse_audacity_labels(const std::string& text,
                                              const std::string& source_id = "");

std::vector<Annotation> read_audacity_labels(const std::string& path);

/// Apply a label scheme. Binary mode relabels positives to "Bird" and drops
/// "No Bird"; classifier mode drops excluded labels and remaps the rest.
///
/// Throws: UnknownLabel when a label is in neither the remap nor the dropped
/// set (annotation vocabulary drift).
std::vector<Annotation> apply_scheme(const std::vector<Annotation>& annotations,
                                     const LabelScheme& scheme);

/// Convert one annotation to the normalized box:
/// x_center = (start+end)/(2*duration), x_width = (end-start)/duration.
///
/// Throws: OutOfRange when the span lies outside [0, duration].
YoloBox to_yolo(const Annotation& annotation, double file_duration_s, const LabelScheme& scheme);

/// One text row per box, space separated, class zero-indexed, coordinates
/// with six decimals. An empty list produces an empty (zero-byte) file.
void write_yolo_file(const std::vector<YoloBox>& boxes, const std::string& path);

/// Exact inverse of write_yolo_file up to formatting precision.
///
/// Throws: MalformedRow, CoordinateOutOfRange.
std::vector<YoloBox> read_yolo_file(const std::string& path);

/// Interchange CSV (header: source_id,start_s,end_s,fmin_hz,fmax_hz,label).
/// "No Bird" rows are retained here; they only vanish from positive box sets.
void write_annotations_csv(const std::vector<Annotation>& annotations, const std::string& path);
std::vector<Annotation> read_annotations_csv(const std::string& path);

/// classes.txt manifest: one class per line, line number = class_idx.
void write_classes_manifest(const LabelScheme& scheme, const std::string& path);
std::vector<std::string> read_classes_manifest(const std::string& path);

}  // namespace songsieve
