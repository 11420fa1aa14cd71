#pragma once

// Helpers for driving the installed CLI binary from tests.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace cli_util {

namespace fs = std::filesystem;

struct CliResult {
    int exit_code = -1;
    std::string stdout_text;
};

inline fs::path temp_dir() {
    fs::path dir = fs::temp_directory_path() / "qcorr_tests";
    fs::create_directories(dir);
    return dir;
}

inline std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

inline CliResult run_cli(const std::string& args) {
    const fs::path out = temp_dir() / "stdout.txt";
    const std::string cmd =
        std::string(QCORR_CLI_PATH) + " " + args + " > " + out.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.stdout_text = slurp(out);
    return r;
}

} // namespace cli_util
