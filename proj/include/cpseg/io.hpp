#pragma once

#include "cpseg/score_model.hpp"
#include "cpseg/scorer.hpp"

#include <json.hpp>

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <sys/types.h>

namespace cpseg {

/// Score files are JSON Lines, one object per unit:
///   {"idx": 0, "score": -0.31, "n_tokens": 17, "var": 0.02, "text": "..."}
/// idx, score and n_tokens are required; var and text are optional. Blank
/// lines are skipped. Violations raise ParseError or SchemaError carrying the
/// 1-based line number.
ScoreSeries read_scores(std::istream &in);
ScoreSeries load_scores(const std::filesystem::path &path);

void write_scores(std::ostream &out, const ScoreSeries &series);
void save_scores(const std::filesystem::path &path, const ScoreSeries &series);

/// {"N": 6, "change_points": [2]} with extra members ignored, so segment
/// output files can be read back as predictions.
Segmentation segmentation_from_json(const nlohmann::json &j);
nlohmann::json segmentation_to_json(const Segmentation &seg);
nlohmann::json read_json_file(const std::filesystem::path &path);
void write_text_file(const std::filesystem::path &path, const std::string &text);

/// Segment scorer running as a child process (`/bin/sh -c command`).
///
/// Each query writes {"op":"segment_score","start":s,"end":e} followed by a
/// newline to the child's stdin and reads one line back, either {"score": x}
/// or {"error": "..."}. Any error reply, malformed reply or closed pipe
/// raises ScorerFailure. Queries are strictly serialized.
class SubprocessScorer final : public SegmentScorer {
public:
    explicit SubprocessScorer(const std::string &command);
    ~SubprocessScorer() override;

    SubprocessScorer(const SubprocessScorer &) = delete;
    SubprocessScorer &operator=(const SubprocessScorer &) = delete;

    double score(std::size_t first, std::size_t last) override;
    std::size_t requests() const noexcept { return requests_; }

private:
    std::string read_line();
    void shutdown() noexcept;

    pid_t child_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    std::string buffer_;
    std::size_t requests_ = 0;
};

} // namespace cpseg
