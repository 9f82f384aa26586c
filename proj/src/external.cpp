#include "mid/external.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <sstream>

#include "mid/errors.hpp"

namespace mid {

ExternalCommand parse_command(const std::string& spec, double timeout_seconds) {
  ExternalCommand cmd;
  cmd.timeout_seconds = timeout_seconds;
  std::istringstream in(spec);
  std::string tok;
  while (in >> tok) cmd.argv.push_back(tok);
  if (cmd.argv.empty()) throw InputError("empty external compressor command");
  return cmd;
}

ExternalCompressor::ExternalCompressor(ExternalCommand cmd)
    : cmd_(std::move(cmd)) {
  if (cmd_.argv.empty()) throw InputError("empty external compressor command");
  std::string joined;
  for (const auto& a : cmd_.argv) {
    if (!joined.empty()) joined += ' ';
    joined += a;
  }
  id_ = "external:" + joined;
}

namespace {

struct Pipe {
  int fds[2] = {-1, -1};
  Pipe() {
    if (pipe(fds) != 0) throw ProcessError("spawn failed: pipe unavailable");
  }
  ~Pipe() {
    close_read();
    close_write();
  }
  void close_read() {
    if (fds[0] >= 0) close(fds[0]);
    fds[0] = -1;
  }
  void close_write() {
    if (fds[1] >= 0) close(fds[1]);
    fds[1] = -1;
  }
};

void set_nonblock(int fd) {
  fcntl(fd, F_SETFL, fcntl(fd, F_GETFL, 0) | O_NONBLOCK);
}

}  // namespace

Bytes ExternalCompressor::run_once(const Bytes& input) const {
  // A filter that exits early must not kill us via SIGPIPE; the write error
  // path below copes with the closed pipe instead.
  static const bool sigpipe_ignored = [] {
    signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)sigpipe_ignored;

  Pipe to_child, from_child, err_child, exec_flag;
  fcntl(exec_flag.fds[1], F_SETFD, FD_CLOEXEC);

  pid_t pid = fork();
  if (pid < 0) throw ProcessError("spawn failed: fork: " + std::string(strerror(errno)));
  if (pid == 0) {
    dup2(to_child.fds[0], STDIN_FILENO);
    dup2(from_child.fds[1], STDOUT_FILENO);
    dup2(err_child.fds[1], STDERR_FILENO);
    to_child.close_read();
    to_child.close_write();
    from_child.close_read();
    from_child.close_write();
    err_child.close_read();
    err_child.close_write();
    exec_flag.close_read();
    std::vector<char*> argv;
    for (const auto& a : cmd_.argv) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    execvp(argv[0], argv.data());
    int err = errno;
    ssize_t ignored = write(exec_flag.fds[1], &err, sizeof(err));
    (void)ignored;
    _exit(127);
  }

  to_child.close_read();
  from_child.close_write();
  err_child.close_write();
  exec_flag.close_write();
  set_nonblock(to_child.fds[1]);
  set_nonblock(from_child.fds[0]);
  set_nonblock(err_child.fds[0]);

  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(cmd_.timeout_seconds));

  Bytes out;
  std::string err_text;
  std::size_t written = 0;
  bool timed_out = false;

  while (true) {
    pollfd fds[3];
    nfds_t n = 0;
    int wi = -1, oi = -1, ei = -1;
    if (to_child.fds[1] >= 0) {
      wi = n;
      fds[n++] = {to_child.fds[1], POLLOUT, 0};
    }
    if (from_child.fds[0] >= 0) {
      oi = n;
      fds[n++] = {from_child.fds[0], POLLIN, 0};
    }
    if (err_child.fds[0] >= 0) {
      ei = n;
      fds[n++] = {err_child.fds[0], POLLIN, 0};
    }
    if (n == 0) break;

    auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      timed_out = true;
      break;
    }
    int wait_ms = static_cast<int>(
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now)
            .count());
    int rc = poll(fds, n, std::max(1, std::min(wait_ms, 1000)));
    if (rc < 0) {
      if (errno == EINTR) continue;
      kill(pid, SIGKILL);
      waitpid(pid, nullptr, 0);
      throw ProcessError("spawn failed: poll: " + std::string(strerror(errno)));
    }

    if (wi >= 0 && (fds[wi].revents & (POLLOUT | POLLERR | POLLHUP))) {
      if (fds[wi].revents & (POLLERR | POLLHUP)) {
        to_child.close_write();  // consumer stopped reading; fine for filters
      } else {
        ssize_t w = write(to_child.fds[1], input.data() + written,
                          input.size() - written);
        if (w > 0) written += static_cast<std::size_t>(w);
        if (w < 0 && errno != EAGAIN && errno != EINTR) to_child.close_write();
        if (written == input.size()) to_child.close_write();
      }
    }
    if (oi >= 0 && (fds[oi].revents & (POLLIN | POLLHUP | POLLERR))) {
      std::uint8_t buf[65536];
      ssize_t r = read(from_child.fds[0], buf, sizeof(buf));
      if (r > 0)
        out.insert(out.end(), buf, buf + r);
      else if (r == 0 || (r < 0 && errno != EAGAIN && errno != EINTR))
        from_child.close_read();
    }
    if (ei >= 0 && (fds[ei].revents & (POLLIN | POLLHUP | POLLERR))) {
      char buf[4096];
      ssize_t r = read(err_child.fds[0], buf, sizeof(buf));
      if (r > 0) {
        if (err_text.size() < 2000) err_text.append(buf, buf + r);
      } else if (r == 0 || (r < 0 && errno != EAGAIN && errno != EINTR)) {
        err_child.close_read();
      }
    }
  }

  if (timed_out) {
    kill(pid, SIGKILL);
    waitpid(pid, nullptr, 0);
    throw BudgetError("external compressor timeout: " + id_);
  }

  int status = 0;
  waitpid(pid, &status, 0);

  int exec_errno = 0;
  if (read(exec_flag.fds[0], &exec_errno, sizeof(exec_errno)) ==
      sizeof(exec_errno)) {
    throw ProcessError("spawn failed: " + cmd_.argv[0] + ": " +
                       strerror(exec_errno));
  }
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    std::string detail = WIFEXITED(status)
                             ? "exit status " + std::to_string(WEXITSTATUS(status))
                             : "killed by signal";
    if (!err_text.empty()) {
      if (err_text.size() > 300) err_text.resize(300);
      detail += "; stderr: " + err_text;
    }
    throw ProcessError("external compressor failed (" + detail + "): " + id_);
  }
  return out;
}

double ExternalCompressor::size_bits(const Bytes& data) {
  Bytes out = run_once(data);
  if (out.empty() && !data.empty())
    throw ProcessError("external compressor produced empty output: " + id_);
  return 8.0 * static_cast<double>(out.size());
}

void ExternalCompressor::audit_determinism(const Bytes& sample) const {
  Bytes a = run_once(sample);
  Bytes b = run_once(sample);
  if (a != b)
    throw ProcessError("nondeterministic compressor: " + id_ +
                       " produced different outputs for identical input");
}

CompressorProfile ExternalCompressor::profile() const {
  CompressorProfile p;
  p.id = id_;
  p.deterministic = true;  // enforced by audit_determinism
  p.external = true;
  p.header_bits = 0.0;
  return p;
}

}  // namespace mid
