// SPDX-License-Identifier: Apache-2.0
#include "cweseed/runner.hpp"

#include "cweseed/error.hpp"

#include <nlohmann/json.hpp>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <random>

namespace cweseed::runner {

namespace {

std::string replace_all(std::string text, std::string_view needle,
                        std::string_view replacement) {
    std::size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        text.replace(pos, needle.size(), replacement);
        pos += replacement.size();
    }
    return text;
}

std::filesystem::path make_scratch_dir() {
    auto base = std::filesystem::temp_directory_path();
    static std::mt19937_64 gen(std::random_device{}());
    for (int attempt = 0; attempt < 16; ++attempt) {
        auto dir = base / ("cweseed-case-" + std::to_string(gen()));
        std::error_code ec;
        if (std::filesystem::create_directory(dir, ec)) {
            return dir;
        }
    }
    throw Error("RunnerUnavailable", "cannot create scratch directory under " +
                                         base.string());
}

void ignore_sigpipe_once() {
    static const bool done = [] {
        ::signal(SIGPIPE, SIG_IGN);
        return true;
    }();
    (void)done;
}

} // namespace

SmokeSuite load_smoke_suite(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("FileNotFound", "cannot open " + path.string());
    }
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, true, true);
    SmokeSuite suite;
    const nlohmann::json* cases = &doc;
    if (doc.is_object()) {
        suite.suite_id = doc.value("suite_id", "");
        if (!doc.contains("cases")) {
            throw Error("MalformedSuite", path.string() + ": missing cases array");
        }
        cases = &doc["cases"];
    }
    if (!cases->is_array()) {
        throw Error("MalformedSuite", path.string() + ": cases must be an array");
    }
    for (const auto& c : *cases) {
        SmokeCase smoke;
        smoke.name = c.value("name", "case-" + std::to_string(suite.cases.size()));
        if (!c.contains("command")) {
            throw Error("MalformedSuite", "case '" + smoke.name + "' lacks a command");
        }
        smoke.command = c["command"].get<std::string>();
        smoke.stdin_data = c.value("stdin", "");
        smoke.must_pass = c.value("must_pass", true);
        suite.cases.push_back(std::move(smoke));
    }
    if (suite.suite_id.empty()) {
        suite.suite_id = path.stem().string();
    }
    return suite;
}

std::string normalize_output(std::string_view raw) {
    std::string out;
    std::size_t start = 0;
    while (start <= raw.size()) {
        std::size_t nl = raw.find('\n', start);
        std::size_t end = nl == std::string_view::npos ? raw.size() : nl;
        std::size_t trimmed = end;
        while (trimmed > start &&
               (raw[trimmed - 1] == ' ' || raw[trimmed - 1] == '\t' ||
                raw[trimmed - 1] == '\r')) {
            --trimmed;
        }
        out.append(raw.substr(start, trimmed - start));
        if (nl == std::string_view::npos) {
            break;
        }
        out.push_back('\n');
        start = nl + 1;
    }
    return out;
}

CaseOutcome ProcessRunner::run_case(const SmokeCase& smoke,
                                    const std::string& target_rel,
                                    std::string_view code) const {
    ignore_sigpipe_once();

    auto scratch = make_scratch_dir();
    struct Cleanup {
        std::filesystem::path dir;
        ~Cleanup() {
            std::error_code ec;
            std::filesystem::remove_all(dir, ec);
        }
    } cleanup{scratch};

    if (!options_.workspace.empty()) {
        std::error_code ec;
        std::filesystem::copy(options_.workspace, scratch,
                              std::filesystem::copy_options::recursive, ec);
        if (ec) {
            throw Error("RunnerUnavailable",
                        "cannot copy workspace: " + ec.message());
        }
    }
    auto target = scratch / target_rel;
    std::filesystem::create_directories(target.parent_path());
    {
        std::ofstream out(target, std::ios::binary);
        out.write(code.data(), static_cast<std::streamsize>(code.size()));
    }

    std::string command = replace_all(smoke.command, "{{file}}", target_rel);

    int in_pipe[2], out_pipe[2];
    if (::pipe(in_pipe) != 0 || ::pipe(out_pipe) != 0) {
        throw Error("RunnerUnavailable", "pipe() failed");
    }

    pid_t pid = ::fork();
    if (pid < 0) {
        throw Error("RunnerUnavailable", "fork() failed");
    }
    if (pid == 0) {
        ::dup2(in_pipe[0], STDIN_FILENO);
        ::dup2(out_pipe[1], STDOUT_FILENO);
        int devnull = ::open("/dev/null", O_WRONLY);
        if (devnull >= 0) {
            ::dup2(devnull, STDERR_FILENO);
        }
        ::close(in_pipe[0]);
        ::close(in_pipe[1]);
        ::close(out_pipe[0]);
        ::close(out_pipe[1]);
        if (::chdir(scratch.c_str()) != 0) {
            ::_exit(127);
        }
        std::string path_var = "PATH=";
        if (const char* p = std::getenv("PATH")) path_var += p;
        std::string home_var = "HOME=";
        if (const char* p = std::getenv("HOME")) home_var += p;
        std::string lang_var = "LANG=";
        if (const char* p = std::getenv("LANG")) lang_var += p;
        std::string lc_var = "LC_ALL=";
        if (const char* p = std::getenv("LC_ALL")) lc_var += p;
        char* envp[] = {path_var.data(), home_var.data(), lang_var.data(),
                        lc_var.data(), nullptr};
        ::execle("/bin/sh", "sh", "-c", command.c_str(),
                 static_cast<char*>(nullptr), envp);
        ::_exit(127);
    }

    ::close(in_pipe[0]);
    ::close(out_pipe[1]);
    ::fcntl(in_pipe[1], F_SETFL, O_NONBLOCK);
    ::fcntl(out_pipe[0], F_SETFL, O_NONBLOCK);

    CaseOutcome outcome;
    std::string captured;
    std::size_t written = 0;
    bool stdin_open = true;
    auto deadline = std::chrono::steady_clock::now() + options_.timeout;

    while (true) {
        struct pollfd fds[2];
        int nfds = 0;
        int out_idx = -1, in_idx = -1;
        fds[nfds] = {out_pipe[0], POLLIN, 0};
        out_idx = nfds++;
        if (stdin_open) {
            fds[nfds] = {in_pipe[1], POLLOUT, 0};
            in_idx = nfds++;
        }
        auto now = std::chrono::steady_clock::now();
        if (now >= deadline) {
            outcome.timed_out = true;
            ::kill(pid, SIGKILL);
            break;
        }
        int wait_ms = static_cast<int>(
            std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now)
                .count());
        int ready = ::poll(fds, static_cast<nfds_t>(nfds), std::min(wait_ms, 200));
        if (ready < 0 && errno != EINTR) {
            break;
        }
        if (stdin_open) {
            if (written >= smoke.stdin_data.size()) {
                ::close(in_pipe[1]);
                stdin_open = false;
            } else if (in_idx >= 0 && (fds[in_idx].revents & (POLLOUT | POLLERR))) {
                ssize_t n = ::write(in_pipe[1], smoke.stdin_data.data() + written,
                                    smoke.stdin_data.size() - written);
                if (n > 0) {
                    written += static_cast<std::size_t>(n);
                } else if (n < 0 && errno != EAGAIN && errno != EINTR) {
                    ::close(in_pipe[1]);
                    stdin_open = false; // child closed stdin early
                }
            }
        }
        if (fds[out_idx].revents & (POLLIN | POLLHUP)) {
            char buf[4096];
            ssize_t n;
            while ((n = ::read(out_pipe[0], buf, sizeof buf)) > 0) {
                captured.append(buf, static_cast<std::size_t>(n));
            }
            if (n == 0) {
                break; // EOF: child closed stdout
            }
        }
    }
    if (stdin_open) {
        ::close(in_pipe[1]);
    }
    // Drain whatever remains after EOF/kill.
    char buf[4096];
    ssize_t n;
    while ((n = ::read(out_pipe[0], buf, sizeof buf)) > 0) {
        captured.append(buf, static_cast<std::size_t>(n));
    }
    ::close(out_pipe[0]);

    int status = 0;
    ::waitpid(pid, &status, 0);
    if (WIFEXITED(status)) {
        outcome.exit_code = WEXITSTATUS(status);
    } else if (WIFSIGNALED(status)) {
        outcome.exit_code = 128 + WTERMSIG(status);
    }
    outcome.stdout_text = normalize_output(captured);
    return outcome;
}

std::string_view to_string(Verdict verdict) {
    switch (verdict) {
    case Verdict::Equivalent: return "equivalent";
    case Verdict::Diverged: return "diverged";
    case Verdict::SyntaxOnly: return "syntax_only";
    }
    return "syntax_only";
}

EquivalenceReport behavioral_check(const corpus::SubmissionFile& original,
                                   std::string_view injected_code,
                                   const SmokeSuite& suite,
                                   const ProcessRunner& runner) {
    EquivalenceReport report;
    report.suite_id = suite.suite_id;
    if (suite.cases.empty()) {
        report.verdict = Verdict::SyntaxOnly;
        return report;
    }
    bool all_must_pass_agree = true;
    for (const auto& smoke : suite.cases) {
        CaseComparison cmp;
        cmp.name = smoke.name;
        cmp.must_pass = smoke.must_pass;
        cmp.original = runner.run_case(smoke, original.path, original.content);
        cmp.injected = runner.run_case(smoke, original.path, injected_code);
        cmp.agreed = !cmp.original.timed_out && !cmp.injected.timed_out &&
                     cmp.original.exit_code == cmp.injected.exit_code &&
                     cmp.original.stdout_text == cmp.injected.stdout_text;
        if (smoke.must_pass && !cmp.agreed) {
            all_must_pass_agree = false;
        }
        report.cases.push_back(std::move(cmp));
    }
    report.verdict =
        all_must_pass_agree ? Verdict::Equivalent : Verdict::Diverged;
    return report;
}

} // namespace cweseed::runner
