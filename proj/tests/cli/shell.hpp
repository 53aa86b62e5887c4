#pragma once

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <tuple>

#include <json.hpp>

namespace cli {

struct Result {
    int code = -1;
    std::string out;
};

inline std::string quote(const std::string& s) {
    std::string q = "'";
    for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
    return q + "'";
}

// Runs `workbench ARGS`, capturing stdout; stderr is discarded.
inline Result workbench(const std::string& args) {
    std::string cmd = quote(WORKBENCH_PATH) + " " + args + " 2>/dev/null";
    Result r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

inline std::string write_temp(const std::string& name, const std::string& body) {
    std::string path = std::string(CLI_TMP_DIR) + "/" + name;
    std::ofstream(path) << body;
    return path;
}

using ResidualKey = std::tuple<std::string, std::string, std::string, std::string>;  // task, check, probe, value

// Residual lines of the text report, keyed by the task they belong to.
inline std::multiset<ResidualKey> text_residuals(const std::string& out) {
    static const std::regex task_re(R"(^\[(pass|fail|error)\] (.*) \(\d+ ms\)$)");
    static const std::regex res_re(R"(^      \[(.*?)\] (.*) -> (.*)$)");
    std::multiset<ResidualKey> keys;
    std::istringstream in(out);
    std::string task;
    for (std::string line; std::getline(in, line);) {
        std::smatch m;
        if (std::regex_match(line, m, task_re))
            task = m[2];
        else if (std::regex_match(line, m, res_re))
            keys.insert({task, m[1], m[2], m[3]});
    }
    return keys;
}

inline std::multiset<ResidualKey> json_residuals(const std::string& path) {
    nlohmann::json doc = nlohmann::json::parse(std::ifstream(path));
    std::multiset<ResidualKey> keys;
    for (const auto& t : doc)
        for (const auto& r : t["residuals"]) keys.insert({t["task"].get<std::string>(), r["check"].get<std::string>(), r["probe"].get<std::string>(), r["value"].get<std::string>()});
    return keys;
}

}  // namespace cli
