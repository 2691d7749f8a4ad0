#include "cpseg/io.hpp"

#include "cpseg/errors.hpp"

#include <cerrno>
#include <cmath>
#include <csignal>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

namespace cpseg {

namespace {

bool is_blank(const std::string &line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

SentenceRecord parse_record(const nlohmann::json &j, std::size_t line, std::size_t expected_idx) {
    if (!j.is_object()) throw SchemaError(line, "<record>", "expected a JSON object");

    SentenceRecord r;
    auto idx = j.find("idx");
    if (idx == j.end()) throw SchemaError(line, "idx", "missing");
    if (!idx->is_number_integer() || idx->get<long long>() < 0) {
        throw SchemaError(line, "idx", "must be a non-negative integer");
    }
    r.index = idx->get<std::size_t>();
    if (r.index != expected_idx) {
        throw SchemaError(line, "idx",
                          "expected " + std::to_string(expected_idx) + ", got " + std::to_string(r.index));
    }

    auto score = j.find("score");
    if (score == j.end()) throw SchemaError(line, "score", "missing");
    if (!score->is_number()) throw SchemaError(line, "score", "must be a number");
    r.score = score->get<double>();
    if (!std::isfinite(r.score)) throw SchemaError(line, "score", "must be finite");

    auto tokens = j.find("n_tokens");
    if (tokens == j.end()) throw SchemaError(line, "n_tokens", "missing");
    if (!tokens->is_number_integer() || tokens->get<long long>() < 1) {
        throw SchemaError(line, "n_tokens", "must be an integer >= 1");
    }
    r.token_count = tokens->get<long>();

    if (auto var = j.find("var"); var != j.end() && !var->is_null()) {
        if (!var->is_number()) throw SchemaError(line, "var", "must be a number");
        const double v = var->get<double>();
        if (!(v > 0.0) || !std::isfinite(v)) throw SchemaError(line, "var", "must be positive");
        r.var_estimate = v;
    }
    if (auto text = j.find("text"); text != j.end() && !text->is_null()) {
        if (!text->is_string()) throw SchemaError(line, "text", "must be a string");
        r.text = text->get<std::string>();
    }
    return r;
}

} // namespace

ScoreSeries read_scores(std::istream &in) {
    std::vector<SentenceRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error &e) {
            throw ParseError(line_no, e.what());
        }
        records.push_back(parse_record(j, line_no, records.size()));
    }
    if (records.size() < 2) {
        throw SchemaError(line_no, "<file>", "a score file needs at least 2 records");
    }
    return ScoreSeries(std::move(records));
}

ScoreSeries load_scores(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open score file " + path.string());
    return read_scores(in);
}

void write_scores(std::ostream &out, const ScoreSeries &series) {
    for (const auto &r : series.records()) {
        nlohmann::json j{{"idx", r.index}, {"score", r.score}, {"n_tokens", r.token_count}};
        if (r.var_estimate) j["var"] = *r.var_estimate;
        if (r.text) j["text"] = *r.text;
        out << j.dump() << '\n';
    }
}

void save_scores(const std::filesystem::path &path, const ScoreSeries &series) {
    std::ostringstream out;
    write_scores(out, series);
    write_text_file(path, out.str());
}

Segmentation segmentation_from_json(const nlohmann::json &j) {
    if (!j.is_object()) throw InvalidArgument("segmentation must be a JSON object");
    auto n = j.find("N");
    auto cps = j.find("change_points");
    if (n == j.end() || !n->is_number_integer() || n->get<long long>() < 1) {
        throw InvalidArgument("segmentation needs a positive integer 'N'");
    }
    if (cps == j.end() || !cps->is_array()) {
        throw InvalidArgument("segmentation needs a 'change_points' array");
    }
    std::vector<std::size_t> points;
    for (const auto &c : *cps) {
        if (!c.is_number_integer() || c.get<long long>() < 0) {
            throw InvalidArgument("change points must be non-negative integers");
        }
        points.push_back(c.get<std::size_t>());
    }
    return Segmentation(std::move(points), n->get<std::size_t>());
}

nlohmann::json segmentation_to_json(const Segmentation &seg) {
    return {{"N", seg.length()}, {"change_points", seg.change_points()}};
}

nlohmann::json read_json_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw InvalidArgument(path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write " + path.string());
    out << text;
    if (!out) throw InvalidArgument("failed writing " + path.string());
}

SubprocessScorer::SubprocessScorer(const std::string &command) {
    // A dead child must surface as ScorerFailure, not terminate us.
    std::signal(SIGPIPE, SIG_IGN);

    int in_pipe[2];
    int out_pipe[2];
    if (pipe(in_pipe) != 0) throw ScorerFailure(std::string("pipe: ") + std::strerror(errno));
    if (pipe(out_pipe) != 0) {
        close(in_pipe[0]);
        close(in_pipe[1]);
        throw ScorerFailure(std::string("pipe: ") + std::strerror(errno));
    }
    child_ = fork();
    if (child_ < 0) {
        for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
        throw ScorerFailure(std::string("fork: ") + std::strerror(errno));
    }
    if (child_ == 0) {
        dup2(in_pipe[0], STDIN_FILENO);
        dup2(out_pipe[1], STDOUT_FILENO);
        for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
        execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char *>(nullptr));
        _exit(127);
    }
    close(in_pipe[0]);
    close(out_pipe[1]);
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];
}

SubprocessScorer::~SubprocessScorer() { shutdown(); }

void SubprocessScorer::shutdown() noexcept {
    if (to_child_ >= 0) close(to_child_);
    if (from_child_ >= 0) close(from_child_);
    to_child_ = from_child_ = -1;
    if (child_ > 0) {
        int status = 0;
        waitpid(child_, &status, 0);
        child_ = -1;
    }
}

std::string SubprocessScorer::read_line() {
    for (;;) {
        if (auto pos = buffer_.find('\n'); pos != std::string::npos) {
            std::string line = buffer_.substr(0, pos);
            buffer_.erase(0, pos + 1);
            return line;
        }
        char chunk[4096];
        const ssize_t got = read(from_child_, chunk, sizeof chunk);
        if (got < 0 && errno == EINTR) continue;
        if (got <= 0) throw ScorerFailure("scorer process closed its output");
        buffer_.append(chunk, static_cast<std::size_t>(got));
    }
}

double SubprocessScorer::score(std::size_t first, std::size_t last) {
    if (to_child_ < 0) throw ScorerFailure("scorer process is not running");
    const nlohmann::json request{{"op", "segment_score"}, {"start", first}, {"end", last}};
    const std::string line = request.dump() + "\n";
    std::size_t sent = 0;
    while (sent < line.size()) {
        const ssize_t n = write(to_child_, line.data() + sent, line.size() - sent);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) throw ScorerFailure("cannot write to scorer process");
        sent += static_cast<std::size_t>(n);
    }
    ++requests_;

    const auto reply_text = read_line();
    nlohmann::json reply;
    try {
        reply = nlohmann::json::parse(reply_text);
    } catch (const nlohmann::json::parse_error &) {
        throw ScorerFailure("malformed scorer reply: " + reply_text);
    }
    if (!reply.is_object()) throw ScorerFailure("malformed scorer reply: " + reply_text);
    if (auto err = reply.find("error"); err != reply.end()) {
        throw ScorerFailure("scorer error for [" + std::to_string(first) + ", " +
                            std::to_string(last) + "]: " + err->dump());
    }
    auto value = reply.find("score");
    if (value == reply.end() || !value->is_number() || !std::isfinite(value->get<double>())) {
        throw ScorerFailure("scorer reply has no finite score: " + reply_text);
    }
    return value->get<double>();
}

} // namespace cpseg
