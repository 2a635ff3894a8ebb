#include "songsieve/annotations.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "songsieve/csv.hpp"
#include "songsieve/error.hpp"

namespace songsieve {

namespace {

const std::string kNoBird = "No Bird";
const std::string kBird = "Bird";

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

double parse_time(const std::string& text, const std::string& context) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw error(errc::malformed_row, "non-numeric value '" + text + "' in " + context);
    }
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error(errc::io_failure, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

LabelScheme LabelScheme::binary() {
    LabelScheme scheme;
    scheme.mode = Mode::binary;
    scheme.keep = {kBird};
    scheme.dropped = {kNoBird};
    return scheme;
}

LabelScheme LabelScheme::classifier(const std::set<std::string>& classes,
                                    const std::set<std::string>& extra_dropped) {
    LabelScheme scheme;
    scheme.mode = Mode::classifier;
    scheme.keep = classes;
    scheme.dropped = {"Alaudidae", kBird, "Fringillidae", "Upupa epops"};
    scheme.dropped.insert(extra_dropped.begin(), extra_dropped.end());
    for (const std::string& c : classes)
        if (!scheme.dropped.count(c)) scheme.remap.emplace(c, c);
    return scheme;
}

int LabelScheme::class_index(const std::string& label) const {
    // keep is an ordered set, so iteration order is the lexicographic order
    int idx = 0;
    for (const std::string& c : keep) {
        if (c == label) return idx;
        ++idx;
    }
    throw error(errc::unknown_label, "'" + label + "' is not a scheme class");
}

std::vector<std::string> LabelScheme::class_order() const {
    return {keep.begin(), keep.end()};
}

std::vector<Annotation> parse_audacity_labels(const std::string& text, const std::string& source_id) {
    std::vector<Annotation> annotations;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    bool prev_was_label = false;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = strip_cr(raw);
        if (line.empty()) continue;
        const std::string context = "line " + std::to_string(line_no);
        const std::vector<std::string> fields = split_tabs(line);

        if (fields[0] == "\\") {
            // frequency row attaches to the label row just parsed
            if (!prev_was_label)
                throw error(errc::dangling_frequency_row, context + " has no preceding label row");
            prev_was_label = false;
            if (fields.size() != 3) throw error(errc::malformed_row, context + ": frequency row needs 3 columns");
            Annotation& a = annotations.back();
            const double lo = parse_time(fields[1], context);
            const double hi = parse_time(fields[2], context);
            if (lo <= 0.0 && hi <= 0.0) continue;  // Audacity's no-spectral-selection marker
            if (lo >= hi) throw error(errc::malformed_row, context + ": fmin must be below fmax");
            a.fmin_hz = lo;
            a.fmax_hz = hi;
            continue;
        }

        if (fields.size() != 3) throw error(errc::malformed_row, context + ": expected 3 tab-separated columns");
        Annotation a;
        a.source_id = source_id;
        a.start_s = parse_time(fields[0], context);
        a.end_s = parse_time(fields[1], context);
        a.label = fields[2];
        if (a.start_s < 0.0 || a.start_s >= a.end_s)
            throw error(errc::malformed_row, context + ": start must be >= 0 and before end");
        annotations.push_back(std::move(a));
        prev_was_label = true;
    }
    return annotations;
}

std::vector<Annotation> read_audacity_labels(const std::string& path) {
    return parse_audacity_labels(read_text_file(path), std::filesystem::path(path).stem().string());
}

std::vector<Annotation> apply_scheme(const std::vector<Annotation>& annotations, const LabelScheme& scheme) {
    std::vector<Annotation> out;
    out.reserve(annotations.size());
    for (const Annotation& a : annotations) {
        if (scheme.mode == LabelScheme::Mode::binary) {
            if (a.label == kNoBird) continue;
            Annotation b = a;
            b.label = kBird;
            out.push_back(std::move(b));
            continue;
        }
        if (scheme.dropped.count(a.label)) continue;
        const auto it = scheme.remap.find(a.label);
        if (it == scheme.remap.end())
            throw error(errc::unknown_label, "'" + a.label + "' is in neither the remap nor the dropped set");
        Annotation b = a;
        b.label = it->second;
        out.push_back(std::move(b));
    }
    return out;
}

YoloBox to_yolo(const Annotation& annotation, double file_duration_s, const LabelScheme& scheme) {
    if (file_duration_s <= 0.0) throw error(errc::out_of_range, "file duration must be positive");
    if (annotation.start_s < 0.0 || annotation.end_s > file_duration_s ||
        annotation.start_s >= annotation.end_s)
        throw error(errc::out_of_range, "annotation span outside [0, duration]");
    YoloBox box;
    box.class_idx = scheme.class_index(annotation.label);
    box.x_center = (annotation.start_s + annotation.end_s) / (2.0 * file_duration_s);
    box.x_width = (annotation.end_s - annotation.start_s) / file_duration_s;
    box.y_center = 0.5;
    box.y_height = 1.0;
    return box;
}

void write_yolo_file(const std::vector<YoloBox>& boxes, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error(errc::io_failure, "cannot write " + path);
    char row[96];
    for (const YoloBox& b : boxes) {
        std::snprintf(row, sizeof(row), "%d %.6f %.6f %.6f %.6f\n", b.class_idx, b.x_center,
                      b.y_center, b.x_width, b.y_height);
        out << row;
    }
}

std::vector<YoloBox> read_yolo_file(const std::string& path) {
    const std::string text = read_text_file(path);
    std::vector<YoloBox> boxes;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    // formatted coordinates can sit a rounding step past the unit interval
    constexpr double kTol = 1e-5;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = strip_cr(raw);
        if (line.empty()) continue;
        const std::string context = path + ":" + std::to_string(line_no);
        std::istringstream row(line);
        YoloBox b;
        std::string extra;
        if (!(row >> b.class_idx >> b.x_center >> b.y_center >> b.x_width >> b.y_height) || (row >> extra))
            throw error(errc::malformed_row, context + ": expected 'class x_c y_c w h'");
        const bool unit = b.x_center >= -kTol && b.x_center <= 1.0 + kTol && b.y_center >= -kTol &&
                          b.y_center <= 1.0 + kTol && b.x_width >= -kTol && b.x_width <= 1.0 + kTol &&
                          b.y_height >= -kTol && b.y_height <= 1.0 + kTol;
        const bool span_ok = b.x_center - b.x_width / 2.0 >= -kTol && b.x_center + b.x_width / 2.0 <= 1.0 + kTol;
        if (!unit || !span_ok || b.class_idx < 0)
            throw error(errc::coordinate_out_of_range, context + ": coordinates outside [0,1]");
        boxes.push_back(b);
    }
    return boxes;
}

void write_annotations_csv(const std::vector<Annotation>& annotations, const std::string& path) {
    std::vector<csv::Row> rows;
    rows.push_back({"source_id", "start_s", "end_s", "fmin_hz", "fmax_hz", "label"});
    char buf[64];
    const auto num = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.6f", v);
        return std::string(buf);
    };
    for (const Annotation& a : annotations) {
        rows.push_back({a.source_id, num(a.start_s), num(a.end_s),
                        a.fmin_hz ? num(*a.fmin_hz) : std::string(),
                        a.fmax_hz ? num(*a.fmax_hz) : std::string(), a.label});
    }
    csv::write_file(path, rows);
}

std::vector<Annotation> read_annotations_csv(const std::string& path) {
    const std::vector<csv::Row> rows = csv::read_file(path);
    if (rows.empty() || rows.front().size() < 6 || rows.front()[0] != "source_id")
        throw error(errc::malformed_row, path + ": missing annotations CSV header");
    std::vector<Annotation> annotations;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const csv::Row& row = rows[i];
        const std::string context = path + ":" + std::to_string(i + 1);
        if (row.size() != 6) throw error(errc::malformed_row, context + ": expected 6 columns");
        Annotation a;
        a.source_id = row[0];
        a.start_s = parse_time(row[1], context);
        a.end_s = parse_time(row[2], context);
        if (!row[3].empty()) a.fmin_hz = parse_time(row[3], context);
        if (!row[4].empty()) a.fmax_hz = parse_time(row[4], context);
        a.label = row[5];
        if (a.start_s < 0.0 || a.start_s >= a.end_s)
            throw error(errc::malformed_row, context + ": start must be >= 0 and before end");
        annotations.push_back(std::move(a));
    }
    return annotations;
}

void write_classes_manifest(const LabelScheme& scheme, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error(errc::io_failure, "cannot write " + path);
    for (const std::string& c : scheme.class_order()) out << c << '\n';
}

std::vector<std::string> read_classes_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error(errc::io_failure, "cannot open " + path);
    std::vector<std::string> classes;
    std::string line;
    while (std::getline(in, line)) {
        line = strip_cr(line);
        if (!line.empty()) classes.push_back(line);
    }
    return classes;
}

}  // namespace songsieve
