#include <memory>
#include <nlohmann/json.hpp>
#include <thread>

#include "rmt/io.hpp"
#include "rmt/slq.hpp"

namespace rmt {

namespace {

namespace fs = std::filesystem;

fs::path request_path(const fs::path& dir, std::size_t seq) {
  return dir / ("request_" + std::to_string(seq) + ".rvec");
}

fs::path response_path(const fs::path& dir, std::size_t seq) {
  return dir / ("response_" + std::to_string(seq) + ".rvec");
}

// Publish `v` at `target` so readers never observe a partial file.
void publish(const fs::path& target, std::span<const double> v) {
  fs::path tmp = target;
  tmp += ".tmp";
  io::write_rvec(tmp, v);
  fs::rename(tmp, target);
}

std::size_t read_manifest_dim(const fs::path& dir) {
  const auto bytes = io::read_bytes(dir / "operator.json");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes.begin(), bytes.end());
    const std::size_t n = j.at("dim").get<std::size_t>();
    if (n == 0) throw RejectedInput("stream operator: dim must be positive");
    return n;
  } catch (const nlohmann::json::exception& e) {
    throw NumericFailure(std::string("stream operator: malformed operator.json: ") + e.what());
  }
}

}  // namespace

void write_stream_manifest(const fs::path& dir, std::size_t n) {
  fs::create_directories(dir);
  nlohmann::ordered_json j;
  j["dim"] = n;
  io::write_text(dir / "operator.json", j.dump());
}

LinearOperator stream_operator(const fs::path& dir, StreamOptions opt) {
  LinearOperator op;
  op.dim = read_manifest_dim(dir);
  auto seq = std::make_shared<std::size_t>(0);
  const std::size_t n = op.dim;
  op.apply = [dir, opt, seq, n](std::span<const double> x, std::span<double> y) {
    if (x.size() != n || y.size() != n) throw RejectedInput("stream operator: vector length differs from dim");
    const std::size_t s = (*seq)++;
    publish(request_path(dir, s), x);
    const fs::path resp = response_path(dir, s);
    const auto deadline = std::chrono::steady_clock::now() + opt.timeout;
    while (!fs::exists(resp)) {
      if (std::chrono::steady_clock::now() > deadline) {
        throw NumericFailure("stream operator: timed out waiting for " + resp.string());
      }
      std::this_thread::sleep_for(opt.poll_interval);
    }
    const std::vector<double> r = io::read_rvec(resp);
    if (r.size() != n) throw NumericFailure("stream operator: response length differs from dim");
    std::copy(r.begin(), r.end(), y.begin());
    fs::remove(resp);
    fs::remove(request_path(dir, s));
  };
  return op;
}

std::size_t serve_stream_requests(const fs::path& dir, const LinearOperator& op,
                                  const std::function<bool()>& keep_running, std::size_t max_requests,
                                  StreamOptions opt) {
  std::size_t served = 0;
  std::vector<double> y(op.dim);
  while (served < max_requests && keep_running()) {
    const fs::path req = request_path(dir, served);
    if (!fs::exists(req)) {
      std::this_thread::sleep_for(opt.poll_interval);
      continue;
    }
    const std::vector<double> x = io::read_rvec(req);
    if (x.size() != op.dim) throw NumericFailure("stream server: request length differs from dim");
    op.apply(x, y);
    publish(response_path(dir, served), y);
    ++served;
  }
  return served;
}

}  // namespace rmt
