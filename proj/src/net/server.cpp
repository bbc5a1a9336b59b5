#include "swarm/server.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <thread>
#include <variant>
#include <vector>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "swarm/errors.hpp"
#include "swarm/protocol.hpp"

namespace swarm::net {
namespace {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

// Frames queued beyond this are not worth sending; state frames are dropped
// while a slow client catches up.
constexpr std::size_t kMaxQueuedStates = 4;

class Connection : public std::enable_shared_from_this<Connection> {
 public:
  Connection(tcp::socket socket, const ServerConfig& config, asio::thread_pool& pool,
             std::string id, std::atomic<std::size_t>& live)
      : ws_(std::move(socket)),
        timer_(ws_.get_executor()),
        pool_(pool),
        config_(config),
        live_(live),
        swarm_(sim::spawn_drones(config.drones, config.spawn_bounds, config.seed), config.params,
               config.gains, config.strategy) {
    orch::SessionConfig sc = config.session;
    sc.drones = config.drones;
    sc.seed = config.seed;
    session_ = std::make_unique<orch::Session>(
        std::move(id), config.provider(), sc,
        [this](const PointCloud& targets) { on_targets(targets); });
    ++live_;
  }

  ~Connection() { --live_; }

  void run() {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.text(true);
    ws_.async_accept(
        beast::bind_front_handler(&Connection::on_accept, shared_from_this()));
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    publish_state();
    next_tick_ = std::chrono::steady_clock::now();
    schedule_tick();
    read();
  }

  void read() {
    ws_.async_read(buffer_, beast::bind_front_handler(&Connection::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) {
      close();
      return;
    }
    const std::string text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    handle(text);
    read();
  }

  void handle(const std::string& text) {
    ClientFrame frame;
    try {
      frame = parse_client_frame(text);
    } catch (const ProtocolError& e) {
      send(error_frame("bad_frame", e.what()));
      return;
    }
    if (const auto* s = std::get_if<SetSkyTextFrame>(&frame)) {
      session_->set_sky_text(s->value);
      send(reply_frame(s->value ? "sky_text on" : "sky_text off"));
      return;
    }
    if (session_->busy()) {
      send(error_frame("busy", Busy().what()));
      return;
    }
    asio::post(pool_, [self = shared_from_this(), frame = std::move(frame)] {
      self->execute(frame);
    });
  }

  // Worker thread. Everything touching the socket or swarm is posted back.
  void execute(const ClientFrame& frame) {
    std::vector<std::string> out;
    try {
      orch::CommandOutcome o;
      if (const auto* c = std::get_if<CommandFrame>(&frame)) o = session_->submit_command(c->text);
      else if (const auto* r = std::get_if<RefineFrame>(&frame)) o = session_->refine(r->text);
      else o = session_->apply_dsl(std::get<DslFrame>(frame).text);
      if (!o.reply.empty()) out.push_back(reply_frame(o.reply));
      if (o.error) out.push_back(error_frame(o.error_code, *o.error));
    } catch (const Busy& e) {
      out.push_back(error_frame("busy", e.what()));
    } catch (const LlmUnavailable& e) {
      out.push_back(error_frame("llm_unavailable", e.what()));
    } catch (const ValidationError& e) {
      out.push_back(error_frame("validation_error", e.what()));
    } catch (const std::exception& e) {
      out.push_back(error_frame("internal", e.what()));
    }
    asio::post(ws_.get_executor(), [self = shared_from_this(), out = std::move(out)] {
      for (const std::string& f : out) self->send(f);
    });
  }

  // Worker thread, called by the session after it adopted a new scene.
  void on_targets(const PointCloud& targets) {
    auto scene = session_->scene();
    asio::post(ws_.get_executor(), [self = shared_from_this(), targets, scene] {
      self->swarm_.retarget(targets);
      self->scene_ = scene;
    });
  }

  void schedule_tick() {
    next_tick_ += std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(config_.params.dt));
    timer_.expires_at(next_tick_);
    timer_.async_wait(beast::bind_front_handler(&Connection::on_tick, shared_from_this()));
  }

  void on_tick(beast::error_code ec) {
    if (ec || closed_) return;
    swarm_.tick();
    if (swarm_.world().tick % static_cast<std::uint64_t>(config_.ticks_per_state) == 0)
      publish_state();
    schedule_tick();
  }

  void publish_state() {
    if (queued_states_ >= kMaxQueuedStates) return;
    const sim::WorldState& w = swarm_.world();
    const sdf::Shape shape = scene_ ? *scene_ : sdf::sphere(1.0);
    send(state_frame(w, state_metrics(w, sim::metrics(w, shape), scene_.has_value())), true);
  }

  void send(std::string frame, bool is_state = false) {
    if (closed_) return;
    if (is_state) ++queued_states_;
    outbox_.push_back({std::move(frame), is_state});
    if (outbox_.size() == 1) write();
  }

  void write() {
    ws_.async_write(asio::buffer(outbox_.front().text),
                    beast::bind_front_handler(&Connection::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    if (ec) {
      close();
      return;
    }
    if (outbox_.front().is_state) --queued_states_;
    outbox_.pop_front();
    if (!outbox_.empty()) write();
  }

  void close() {
    closed_ = true;
    timer_.cancel();
  }

  struct Outgoing {
    std::string text;
    bool is_state;
  };

  websocket::stream<beast::tcp_stream> ws_;
  asio::steady_timer timer_;
  asio::thread_pool& pool_;
  const ServerConfig& config_;
  std::atomic<std::size_t>& live_;

  // Strand-only state.
  sim::Swarm swarm_;
  std::optional<sdf::Shape> scene_;
  beast::flat_buffer buffer_;
  std::deque<Outgoing> outbox_;
  std::size_t queued_states_ = 0;
  std::chrono::steady_clock::time_point next_tick_;
  bool closed_ = false;

  std::unique_ptr<orch::Session> session_;
};

}  // namespace

struct Server::Impl {
  explicit Impl(ServerConfig c)
      : config(std::move(c)),
        ioc(config.io_threads),
        acceptor(ioc),
        pool(static_cast<std::size_t>(config.worker_threads)) {}

  void accept() {
    acceptor.async_accept(asio::make_strand(ioc), [this](beast::error_code ec, tcp::socket s) {
      if (ec) return;  // acceptor closed
      try {
        std::make_shared<Connection>(std::move(s), config, pool,
                                     "s" + std::to_string(++next_id), live)
            ->run();
      } catch (const std::exception&) {
        // Bad configuration surfaces in start(); a failing connection is dropped.
      }
      accept();
    });
  }

  ServerConfig config;
  // Outlives the io_context, whose destruction releases the last connections.
  std::atomic<std::size_t> live{0};
  asio::io_context ioc;
  tcp::acceptor acceptor;
  asio::thread_pool pool;
  std::vector<std::thread> threads;
  std::uint64_t next_id = 0;

  std::mutex mu;
  std::condition_variable cv;
  bool stopped = false;
};

Server::Server(ServerConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {
  const ServerConfig& c = impl_->config;
  if (c.drones == 0) throw ValidationError("server needs at least one drone");
  if (c.ticks_per_state < 1) throw ValidationError("ticks_per_state must be at least 1");
  if (c.io_threads < 1 || c.worker_threads < 1)
    throw ValidationError("thread counts must be at least 1");
  if (!c.provider) throw ValidationError("server needs a provider factory");
  c.params.validate();
  c.gains.validate();
}

Server::~Server() { stop(); }

std::uint16_t Server::start() {
  Impl& s = *impl_;
  const tcp::endpoint ep(asio::ip::make_address(s.config.address), s.config.port);
  s.acceptor.open(ep.protocol());
  s.acceptor.set_option(asio::socket_base::reuse_address(true));
  s.acceptor.bind(ep);
  s.acceptor.listen(asio::socket_base::max_listen_connections);
  s.accept();
  for (int i = 0; i < s.config.io_threads; ++i) s.threads.emplace_back([&s] { s.ioc.run(); });
  return s.acceptor.local_endpoint().port();
}

void Server::wait() {
  std::unique_lock lock(impl_->mu);
  impl_->cv.wait(lock, [this] { return impl_->stopped; });
}

void Server::stop() {
  Impl& s = *impl_;
  {
    std::lock_guard lock(s.mu);
    if (s.stopped) return;
    s.stopped = true;
  }
  asio::post(s.ioc, [&s] {
    beast::error_code ec;
    s.acceptor.close(ec);
  });
  s.ioc.stop();
  for (std::thread& t : s.threads) t.join();
  s.threads.clear();
  s.pool.stop();
  s.pool.join();
  s.cv.notify_all();
}

std::size_t Server::connections() const { return impl_->live.load(); }

}  // namespace swarm::net
