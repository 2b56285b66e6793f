/* Copyright 2026 The scproof Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "scproof/process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>
#include <thread>

#include "scproof/error.hpp"
#include "scproof/text.hpp"

extern char** environ;

namespace scproof {

std::optional<std::filesystem::path> find_executable(const std::string& name) {
  if (name.empty()) return std::nullopt;
  if (name.find('/') != std::string::npos) {
    if (::access(name.c_str(), X_OK) == 0) return std::filesystem::path(name);
    return std::nullopt;
  }
  const char* path = std::getenv("PATH");
  if (!path) return std::nullopt;
  std::string_view dirs(path);
  std::size_t start = 0;
  while (start <= dirs.size()) {
    auto colon = dirs.find(':', start);
    if (colon == std::string_view::npos) colon = dirs.size();
    std::filesystem::path candidate = std::filesystem::path(std::string(dirs.substr(start, colon - start))) / name;
    if (::access(candidate.c_str(), X_OK) == 0 && !std::filesystem::is_directory(candidate)) return candidate;
    start = colon + 1;
  }
  return std::nullopt;
}

namespace {

// Owns a file descriptor.
struct Fd {
  int fd = -1;
  Fd() = default;
  explicit Fd(int f) : fd(f) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  ~Fd() { reset(); }
  void reset() {
    if (fd >= 0) ::close(fd);
    fd = -1;
  }
};

struct Pipe {
  Fd read;
  Fd write;
};

void make_pipe(Pipe& p) {
  int fds[2];
  if (::pipe2(fds, O_CLOEXEC) != 0) throw Error(ErrorCode::IoError, std::string("pipe: ") + std::strerror(errno));
  p.read.fd = fds[0];
  p.write.fd = fds[1];
}

struct SpawnActions {
  posix_spawn_file_actions_t actions;
  posix_spawnattr_t attr;
  SpawnActions() {
    posix_spawn_file_actions_init(&actions);
    posix_spawnattr_init(&attr);
  }
  ~SpawnActions() {
    posix_spawn_file_actions_destroy(&actions);
    posix_spawnattr_destroy(&attr);
  }
};

void kill_group(pid_t pid) {
  ::kill(-pid, SIGKILL);
  ::kill(pid, SIGKILL);
}

}  // namespace

// posix_spawn rather than fork: the pipeline launches children from several
// OpenMP threads at once, and forking a multithreaded process can leave the
// child stuck on a lock held by another thread.
ProcessResult run_process(const ProcessSpec& spec) {
  ProcessResult result;
  const auto started = std::chrono::steady_clock::now();
  const auto deadline = started + spec.timeout;

  if (::access(spec.executable.c_str(), X_OK) != 0)
    throw Error(ErrorCode::BackendNotFound, spec.executable.string() + ": not executable");

  // Children get stdin from a file: some tools (solcjs) read it with a
  // blocking call that fails with EAGAIN on a non-blocking pipe.
  text::TempFile stdin_file("scproof-stdin");
  text::write_file(stdin_file.path, spec.stdin_data);
  Fd in(::open(stdin_file.path.c_str(), O_RDONLY | O_CLOEXEC));
  if (in.fd < 0) throw Error(ErrorCode::IoError, "open " + stdin_file.path.string());

  Pipe out_pipe;
  Pipe err_pipe;
  Fd out_file;
  if (spec.stdout_file) {
    out_file.fd = ::open(spec.stdout_file->c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
    if (out_file.fd < 0) throw Error(ErrorCode::IoError, "open " + spec.stdout_file->string());
  } else {
    make_pipe(out_pipe);
  }
  const bool merged = spec.merge_stderr && !spec.stdout_file;
  if (!merged) make_pipe(err_pipe);
  const int child_out = spec.stdout_file ? out_file.fd : out_pipe.write.fd;
  const int child_err = merged ? out_pipe.write.fd : err_pipe.write.fd;

  SpawnActions sa;
  posix_spawn_file_actions_adddup2(&sa.actions, in.fd, 0);
  posix_spawn_file_actions_adddup2(&sa.actions, child_out, 1);
  posix_spawn_file_actions_adddup2(&sa.actions, child_err, 2);
  const std::string cwd = spec.working_dir ? spec.working_dir->string() : std::string();
  if (!cwd.empty()) posix_spawn_file_actions_addchdir_np(&sa.actions, cwd.c_str());
  // Own process group, so a timeout also stops the backend's children.
  posix_spawnattr_setflags(&sa.attr, POSIX_SPAWN_SETPGROUP);
  posix_spawnattr_setpgroup(&sa.attr, 0);

  const std::string exe = spec.executable.string();
  std::vector<std::string> args_storage;
  args_storage.push_back(exe);
  args_storage.insert(args_storage.end(), spec.args.begin(), spec.args.end());
  std::vector<char*> argv;
  for (auto& a : args_storage) argv.push_back(a.data());
  argv.push_back(nullptr);

  pid_t pid = -1;
  const int rc = ::posix_spawn(&pid, exe.c_str(), &sa.actions, &sa.attr, argv.data(), environ);
  if (rc != 0) throw Error(ErrorCode::BackendNotFound, exe + ": " + std::strerror(rc));
  out_pipe.write.reset();
  err_pipe.write.reset();
  out_file.reset();
  in.reset();

  std::array<char, 8192> buf{};
  std::vector<std::pair<int, std::string*>> streams;
  if (out_pipe.read.fd >= 0) streams.emplace_back(out_pipe.read.fd, &result.out);
  if (err_pipe.read.fd >= 0) streams.emplace_back(err_pipe.read.fd, &result.err);
  while (!streams.empty()) {
    const auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      result.timed_out = true;
      break;
    }
    const auto wait_ms = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
    std::vector<pollfd> fds;
    for (const auto& [fd, _] : streams) fds.push_back({fd, POLLIN, 0});
    const int n = ::poll(fds.data(), fds.size(), static_cast<int>(std::min<long long>(wait_ms + 1, 1000)));
    if (n < 0 && errno != EINTR) break;
    for (std::size_t i = fds.size(); i-- > 0;) {
      if (!(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
      const auto got = ::read(fds[i].fd, buf.data(), buf.size());
      if (got > 0) streams[i].second->append(buf.data(), static_cast<std::size_t>(got));
      else if (got == 0 || (errno != EINTR && errno != EAGAIN)) streams.erase(streams.begin() + static_cast<long>(i));
    }
  }

  // Streams are closed (or time is up); the child may still be running.
  int status = 0;
  for (;;) {
    const pid_t w = ::waitpid(pid, &status, WNOHANG);
    if (w == pid) break;
    if (w < 0 && errno != EINTR) break;
    if (result.timed_out || std::chrono::steady_clock::now() >= deadline) {
      result.timed_out = true;
      kill_group(pid);
      ::waitpid(pid, &status, 0);
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  if (result.timed_out) {
    // Keep whatever was already buffered in the pipes.
    for (auto& [fd, sink] : streams) {
      ::fcntl(fd, F_SETFL, O_NONBLOCK);
      ssize_t got;
      while ((got = ::read(fd, buf.data(), buf.size())) > 0) sink->append(buf.data(), static_cast<std::size_t>(got));
    }
    result.exit_status = -1;
  } else if (WIFEXITED(status)) {
    result.exit_status = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.exit_status = 128 + WTERMSIG(status);
  }
  if (spec.stdout_file) {
    std::ifstream file(*spec.stdout_file, std::ios::binary);
    result.out.assign(std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>());
  }
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace scproof
