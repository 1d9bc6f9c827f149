#include "iotsynth/engine.hpp"

#include <filesystem>

#include "iotsynth/appproto.hpp"

namespace iotsynth::engine {

PcapSink::PcapSink(std::vector<std::string> paths) {
    writers_.reserve(paths.size());
    for (auto& p : paths) writers_.push_back(std::make_unique<wire::PcapWriter>(p));
}

void PcapSink::on_packet(const wire::PacketRecord& rec) {
    IOTSYNTH_CHECK(rec.probe_id >= 0 && rec.probe_id < int(writers_.size()),
                   "packet for unknown probe");
    writers_[std::size_t(rec.probe_id)]->write(rec.ts_us, rec.raw);
}

void PcapSink::close() {
    for (auto& w : writers_) w->close();
}

Sim::Sim(const topo::Topology& t, const cfg::EngineConfig& engine_cfg, u64 seed, u64 duration_us)
    : topo_(t),
      engine_cfg_(engine_cfg),
      seed_(seed),
      duration_us_(duration_us),
      latency_us_(seconds_to_us(engine_cfg.link_latency_s)),
      iss_rng_(RngStream::mix(seed, "wire:iss")),
      payload_rng_(RngStream::mix(seed, "wire:payload")) {}

void Sim::at(u64 t_us, std::function<void()> fn) {
    IOTSYNTH_CHECK(t_us >= now_, "event scheduled in the past");
    if (t_us > duration_us_) return;  // beyond the scenario horizon
    queue_.push(Event{t_us, next_seq_++, std::move(fn)});
}

BrokerQueue& Sim::broker_queue(int node_idx) {
    auto it = broker_queues_.find(node_idx);
    if (it == broker_queues_.end()) {
        BrokerQueue q;
        q.service_us = std::max<u64>(1, u64(1e6 / engine_cfg_.broker_capacity_eps + 0.5));
        q.max_queue = engine_cfg_.broker_max_queue;
        it = broker_queues_.emplace(node_idx, q).first;
    }
    return it->second;
}

BrokerPending& Sim::broker_pending(int node_idx) { return broker_pending_[node_idx]; }

void Sim::set_credentials(int broker_node, std::set<std::pair<std::string, std::string>> creds) {
    broker_creds_[broker_node] = std::move(creds);
}

bool Sim::broker_accepts(int broker_node, const std::string& user,
                         const std::string& pass) const {
    auto it = broker_creds_.find(broker_node);
    if (it == broker_creds_.end()) return false;
    return it->second.count({user, pass}) > 0;
}

u16 Sim::ephemeral_port(int node_idx) {
    u16& next = ephemeral_
                    .try_emplace(node_idx, u16(33000))
                    .first->second;
    u16 port = next;
    next = next >= 60999 ? u16(33000) : u16(next + 1);
    return port;
}

u16 Sim::next_ip_id(int node_idx) {
    u16& id = ip_ids_.try_emplace(node_idx, u16(1)).first->second;
    return id++;
}

u64 Sim::arp_gate(int a_node, int b_node) {
    auto key = std::minmax(a_node, b_node);
    if (!arp_done_.insert(std::pair<int, int>(key.first, key.second)).second) return now_;
    const auto& a = node(a_node);
    const auto& b = node(b_node);
    // Request goes out now; the reply follows one link latency later; the
    // caller's first IP frame leaves after the exchange completes.
    wire::Summary req_s;
    req_s.l4 = wire::L4Proto::arp;
    req_s.src_ip = a.ip;
    req_s.dst_ip = b.ip;
    emit_frame(a_node, b_node, wire::build_arp(a.mac, a.ip, b.ip, true, b.mac), req_s,
               Label::normal);
    at(now_ + latency_us_, [this, a_node, b_node] {
        const auto& a2 = node(a_node);
        const auto& b2 = node(b_node);
        wire::Summary rep_s;
        rep_s.l4 = wire::L4Proto::arp;
        rep_s.src_ip = b2.ip;
        rep_s.dst_ip = a2.ip;
        emit_frame(b_node, a_node, wire::build_arp(b2.mac, b2.ip, a2.ip, false, a2.mac), rep_s,
                   Label::normal);
    });
    return now_ + 2 * latency_us_;
}

void Sim::emit_frame(int src_node, int dst_node, std::vector<u8> raw, wire::Summary summary,
                     Label origin) {
    const int probe = probes_.match(node(src_node), node(dst_node));
    if (probe < 0) return;
    wire::PacketRecord rec;
    rec.probe_id = probe;
    rec.ts_us = now_;
    rec.raw = std::move(raw);
    rec.summary = summary;
    rec.origin = origin;
    ++packets_captured_;
    for (auto* s : sinks_) s->on_packet(rec);
}

void Sim::run() {
    while (!queue_.empty()) {
        // const_cast to move the closure out; the queue never reads it again.
        Event& top = const_cast<Event&>(queue_.top());
        IOTSYNTH_CHECK(top.t >= now_, "event queue went backwards");
        now_ = top.t;
        auto fn = std::move(top.fn);
        queue_.pop();
        ++events_executed_;
        fn();
    }
}

// ---- Conversation ----

std::shared_ptr<Conversation> Conversation::make(Sim& sim, int client_node, int server_node,
                                                 u16 server_port, wire::AppTag tag, Label origin) {
    return std::shared_ptr<Conversation>(
        new Conversation(sim, client_node, server_node, server_port, tag, origin));
}

Conversation::Conversation(Sim& sim, int client_node, int server_node, u16 server_port,
                           wire::AppTag tag, Label origin)
    : sim_(sim),
      client_node_(client_node),
      server_node_(server_node),
      client_port_(sim.ephemeral_port(client_node)),
      server_port_(server_port),
      tag_(tag),
      origin_(origin) {
    const auto& c = sim.node(client_node);
    const auto& s = sim.node(server_node);
    session_ = std::make_unique<wire::TcpSession>(
        wire::HostRef{c.ip, client_port_, c.mac}, wire::HostRef{s.ip, server_port, s.mac},
        sim.next_iss(), sim.next_iss());
}

wire::Summary Conversation::make_summary(bool from_client, u8 flags, u32 payload_len,
                                         wire::AppTag tag) {
    const auto& c = sim_.node(client_node_);
    const auto& s = sim_.node(server_node_);
    wire::Summary sum;
    sum.src_ip = from_client ? c.ip : s.ip;
    sum.dst_ip = from_client ? s.ip : c.ip;
    sum.src_port = from_client ? client_port_ : server_port_;
    sum.dst_port = from_client ? server_port_ : client_port_;
    sum.l4 = wire::L4Proto::tcp;
    sum.tcp_flags = flags;
    sum.payload_len = payload_len;
    sum.app_tag = payload_len == 0 ? wire::AppTag::none : tag;
    return sum;
}

void Conversation::emit_now(bool from_client, std::vector<u8> frame, u8 flags, u32 payload_len,
                            wire::AppTag tag) {
    const int src = from_client ? client_node_ : server_node_;
    const int dst = from_client ? server_node_ : client_node_;
    sim_.emit_frame(src, dst, std::move(frame), make_summary(from_client, flags, payload_len, tag),
                    origin_);
}

void Conversation::open(u64 t, Cont cont) {
    auto self = shared_from_this();
    sim_.at(t, [self, cont = std::move(cont)] {
        Sim& sim = self->sim_;
        const u64 base = sim.arp_gate(self->client_node_, self->server_node_);
        const u64 lat = sim.latency_us();
        auto frames = self->session_->open();
        namespace tf = wire::tcpflags;
        sim.at(base, [self, f = std::move(frames[0])]() mutable {
            self->emit_now(true, std::move(f), tf::SYN, 0, wire::AppTag::none);
        });
        sim.at(base + lat, [self, f = std::move(frames[1])]() mutable {
            self->emit_now(false, std::move(f), tf::SYN | tf::ACK, 0, wire::AppTag::none);
        });
        sim.at(base + 2 * lat, [self, f = std::move(frames[2])]() mutable {
            self->emit_now(true, std::move(f), tf::ACK, 0, wire::AppTag::none);
        });
        if (cont) sim.at(base + 2 * lat, [cont, base, lat] { cont(base + 2 * lat); });
    });
}

void Conversation::open_refused(u64 t, Cont cont) {
    auto self = shared_from_this();
    sim_.at(t, [self, cont = std::move(cont)] {
        Sim& sim = self->sim_;
        const u64 base = sim.arp_gate(self->client_node_, self->server_node_);
        const u64 lat = sim.latency_us();
        auto frames = self->session_->open_refused();
        namespace tf = wire::tcpflags;
        sim.at(base, [self, f = std::move(frames[0])]() mutable {
            self->emit_now(true, std::move(f), tf::SYN, 0, wire::AppTag::none);
        });
        sim.at(base + lat, [self, f = std::move(frames[1])]() mutable {
            self->emit_now(false, std::move(f), tf::RST | tf::ACK, 0, wire::AppTag::none);
        });
        if (cont) sim.at(base + lat, [cont, base, lat] { cont(base + lat); });
    });
}

void Conversation::send(bool from_client, u64 t, std::vector<u8> payload, Cont cont,
                        std::optional<wire::AppTag> tag_override, int ack_every) {
    auto self = shared_from_this();
    const wire::AppTag tag = tag_override.value_or(tag_);
    sim_.at(t, [self, from_client, payload = std::move(payload), cont = std::move(cont), tag,
                ack_every] {
        Sim& sim = self->sim_;
        const u64 lat = sim.latency_us();
        const u64 t0 = sim.now();
        auto segments = self->session_->send(from_client, payload);
        namespace tf = wire::tcpflags;
        u64 last_arrival = t0 + lat;
        for (std::size_t i = 0; i < segments.size(); ++i) {
            const u64 ts = t0 + u64(i) * kSegmentGapUs;
            const u32 seg_payload =
                u32(std::min(wire::kMss, payload.size() - i * wire::kMss));
            sim.at(ts, [self, from_client, f = std::move(segments[i]), seg_payload,
                        tag]() mutable {
                self->emit_now(from_client, std::move(f), tf::PSH | tf::ACK, seg_payload, tag);
            });
            last_arrival = ts + lat;
            if (ack_every > 0 && (int(i) % ack_every) == ack_every - 1) {
                // Receiver's cumulative ACK shortly after the segment lands.
                sim.at(ts + lat + 1000, [self, from_client] {
                    auto f = self->session_->ack(!from_client);
                    self->emit_now(!from_client, std::move(f), tf::ACK, 0, wire::AppTag::none);
                });
            }
        }
        if (cont) sim.at(last_arrival, [cont, last_arrival] { cont(last_arrival); });
    });
}

void Conversation::close(bool from_client, u64 t) {
    auto self = shared_from_this();
    sim_.at(t, [self, from_client] {
        if (self->session_->state() != wire::TcpSession::State::established) return;
        Sim& sim = self->sim_;
        const u64 lat = sim.latency_us();
        const u64 t0 = sim.now();
        auto frames = self->session_->close(from_client);
        namespace tf = wire::tcpflags;
        sim.at(t0, [self, from_client, f = std::move(frames[0])]() mutable {
            self->emit_now(from_client, std::move(f), tf::FIN | tf::ACK, 0, wire::AppTag::none);
        });
        sim.at(t0 + lat, [self, from_client, f = std::move(frames[1])]() mutable {
            self->emit_now(!from_client, std::move(f), tf::FIN | tf::ACK, 0, wire::AppTag::none);
        });
        sim.at(t0 + 2 * lat, [self, from_client, f = std::move(frames[2])]() mutable {
            self->emit_now(from_client, std::move(f), tf::ACK, 0, wire::AppTag::none);
        });
    });
}

void Conversation::abort(bool from_client, u64 t) {
    auto self = shared_from_this();
    sim_.at(t, [self, from_client] {
        using St = wire::TcpSession::State;
        if (self->session_->state() == St::reset || self->session_->state() == St::done) return;
        auto f = self->session_->abort(from_client);
        self->emit_now(from_client, std::move(f), wire::tcpflags::RST | wire::tcpflags::ACK, 0,
                       wire::AppTag::none);
    });
}

}  // namespace iotsynth::engine
