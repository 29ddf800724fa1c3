#pragma once

#include <string>
#include <vector>

namespace cochange::history {

struct ProcessResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

/// Runs argv[0] (looked up on PATH) with no shell, capturing both streams.
ProcessResult run_process(const std::vector<std::string>& argv);

/// A long-lived child with piped stdin/stdout, e.g. `git cat-file --batch`.
class PipedProcess {
public:
    explicit PipedProcess(const std::vector<std::string>& argv);
    ~PipedProcess();
    PipedProcess(const PipedProcess&) = delete;
    PipedProcess& operator=(const PipedProcess&) = delete;

    void write(const std::string& data);
    /// Reads through the next '\n' (excluded). Throws at end of stream.
    std::string read_line();
    std::string read_exact(std::size_t n);

private:
    bool fill();

    int pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    std::string buffer_;
    std::size_t pos_ = 0;
};

}  // namespace cochange::history
