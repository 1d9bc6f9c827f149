#pragma once

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "iotsynth/config.hpp"
#include "iotsynth/journal.hpp"
#include "iotsynth/rng.hpp"
#include "iotsynth/topology.hpp"
#include "iotsynth/wire.hpp"

namespace iotsynth::engine {

class CaptureSink {
public:
    virtual ~CaptureSink() = default;
    virtual void on_packet(const wire::PacketRecord& rec) = 0;
};

class MemorySink : public CaptureSink {
public:
    void on_packet(const wire::PacketRecord& rec) override { records.push_back(rec); }
    std::vector<wire::PacketRecord> records;
};

class PcapSink : public CaptureSink {
public:
    // One pcap file per probe id; paths indexed by probe id.
    explicit PcapSink(std::vector<std::string> paths);
    void on_packet(const wire::PacketRecord& rec) override;
    void close();
    u64 count(int probe_id) const { return writers_[std::size_t(probe_id)]->packet_count(); }

private:
    std::vector<std::unique_ptr<wire::PcapWriter>> writers_;
};

class ObserverSink : public CaptureSink {
public:
    explicit ObserverSink(std::function<void(const wire::PacketRecord&)> fn)
        : fn_(std::move(fn)) {}
    void on_packet(const wire::PacketRecord& rec) override { fn_(rec); }

private:
    std::function<void(const wire::PacketRecord&)> fn_;
};

// Single-server queue with a bounded backlog; the broker acknowledges at a
// fixed service rate and drops work arriving beyond the bound.
struct BrokerQueue {
    u64 service_us = 2000;
    int max_queue = 1000;
    u64 next_free_us = 0;
    u64 served = 0;
    u64 dropped = 0;

    // Service completion time, or nullopt when the event is dropped.
    std::optional<u64> submit(u64 arrival_us) {
        u64 backlog = 0;
        if (next_free_us > arrival_us) backlog = (next_free_us - arrival_us) / service_us;
        if (backlog >= u64(max_queue)) {
            ++dropped;
            return std::nullopt;
        }
        const u64 start = std::max(arrival_us, next_free_us);
        next_free_us = start + service_us;
        ++served;
        return next_free_us;
    }
};

// Published messages retained for the MQTT-to-Kafka bridge, bounded in both
// count and bytes; overflow is dropped.
struct BrokerPending {
    std::deque<std::vector<u8>> messages;
    u64 bytes = 0;
    std::size_t max_messages = 100;
    u64 max_bytes = 65536;
    u64 dropped = 0;

    void push(std::vector<u8> payload) {
        if (messages.size() >= max_messages || bytes + payload.size() > max_bytes) {
            ++dropped;
            return;
        }
        bytes += payload.size();
        messages.push_back(std::move(payload));
    }
    std::vector<std::vector<u8>> drain() {
        std::vector<std::vector<u8>> out(messages.begin(), messages.end());
        messages.clear();
        bytes = 0;
        return out;
    }
};

// Deterministic discrete-event kernel: virtual clock, seeded substreams,
// per-broker service queues, ARP bookkeeping, probe matching and sinks.
class Sim {
public:
    Sim(const topo::Topology& t, const cfg::EngineConfig& engine_cfg, u64 seed, u64 duration_us);

    // Event scheduling. Events run in (time, insertion order). Events beyond
    // the scenario duration never run.
    void at(u64 t_us, std::function<void()> fn);
    u64 now() const { return now_; }
    u64 duration_us() const { return duration_us_; }
    u64 seed() const { return seed_; }

    const topo::Topology& topology() const { return topo_; }
    const topo::Node& node(int idx) const { return topo_.node(idx); }
    const cfg::EngineConfig& engine_cfg() const { return engine_cfg_; }
    u64 latency_us() const { return latency_us_; }

    RngStream stream(const std::string& label) const { return RngStream(seed_, label); }

    BrokerQueue& broker_queue(int node_idx);
    BrokerPending& broker_pending(int node_idx);
    void set_credentials(int broker_node, std::set<std::pair<std::string, std::string>> creds);
    bool broker_accepts(int broker_node, const std::string& user, const std::string& pass) const;

    u16 ephemeral_port(int node_idx);
    u32 next_iss() { return iss_rng_.next_u32(); }
    u16 next_ip_id(int node_idx);
    SplitMix64& payload_rng() { return payload_rng_; }

    // Must be called from inside an event. Emits the pair's ARP exchange on
    // first IP contact and returns the time the caller's frame may go out.
    u64 arp_gate(int a_node, int b_node);

    void set_probe_plan(topo::ProbePlan plan) { probes_ = std::move(plan); }
    const topo::ProbePlan& probe_plan() const { return probes_; }
    void add_sink(CaptureSink* sink) { sinks_.push_back(sink); }

    // Records the frame on the matching probe (if any) at now().
    void emit_frame(int src_node, int dst_node, std::vector<u8> raw, wire::Summary summary,
                    Label origin);

    void run();

    u64 packets_captured() const { return packets_captured_; }
    u64 events_executed() const { return events_executed_; }

private:
    struct Event {
        u64 t;
        u64 seq;
        std::function<void()> fn;
    };
    struct EventOrder {
        bool operator()(const Event& a, const Event& b) const {
            if (a.t != b.t) return a.t > b.t;
            return a.seq > b.seq;
        }
    };

    const topo::Topology& topo_;
    cfg::EngineConfig engine_cfg_;
    u64 seed_;
    u64 duration_us_;
    u64 latency_us_;
    u64 now_ = 0;
    u64 next_seq_ = 0;
    u64 events_executed_ = 0;
    u64 packets_captured_ = 0;
    std::priority_queue<Event, std::vector<Event>, EventOrder> queue_;

    std::map<int, BrokerQueue> broker_queues_;
    std::map<int, BrokerPending> broker_pending_;
    std::map<int, std::set<std::pair<std::string, std::string>>> broker_creds_;
    std::map<int, u16> ephemeral_;
    std::map<int, u16> ip_ids_;
    std::set<std::pair<int, int>> arp_done_;
    SplitMix64 iss_rng_;
    SplitMix64 payload_rng_;

    topo::ProbePlan probes_;
    std::vector<CaptureSink*> sinks_;
};

// TCP exchange between two nodes, continuation style: methods schedule
// frames and invoke the continuation with the relevant virtual time.
class Conversation : public std::enable_shared_from_this<Conversation> {
public:
    using Cont = std::function<void(u64)>;

    static std::shared_ptr<Conversation> make(Sim& sim, int client_node, int server_node,
                                              u16 server_port, wire::AppTag tag, Label origin);

    // Handshake starting at t; cont(client_ready_time).
    void open(u64 t, Cont cont);
    // SYN answered by RST-ACK.
    void open_refused(u64 t, Cont cont = {});
    // Data from one side at t; cont(last_segment_arrival). ack_every > 0 makes
    // the peer send a pure ACK after every n-th segment.
    void send(bool from_client, u64 t, std::vector<u8> payload, Cont cont = {},
              std::optional<wire::AppTag> tag_override = std::nullopt, int ack_every = 0);
    void close(bool from_client, u64 t);
    void abort(bool from_client, u64 t);

    u16 client_port() const { return client_port_; }
    wire::TcpSession& session() { return *session_; }
    Label origin() const { return origin_; }

private:
    Conversation(Sim& sim, int client_node, int server_node, u16 server_port, wire::AppTag tag,
                 Label origin);
    void emit_now(bool from_client, std::vector<u8> frame, u8 flags, u32 payload_len,
                  wire::AppTag tag);
    wire::Summary make_summary(bool from_client, u8 flags, u32 payload_len, wire::AppTag tag);

    Sim& sim_;
    int client_node_;
    int server_node_;
    u16 client_port_;
    u16 server_port_;
    wire::AppTag tag_;
    Label origin_;
    std::unique_ptr<wire::TcpSession> session_;
};

// Gap between back-to-back segments of one bulk send.
constexpr u64 kSegmentGapUs = 120;

struct ProbeCapture {
    std::string name;       // capture name = pcap file stem
    std::string pcap_path;  // empty when not written to disk
    u64 packet_count = 0;
};

struct RunOptions {
    std::string out_dir;           // when set, pcap files are written here
    bool keep_in_memory = false;   // retain PacketRecords in the result
    std::function<void(const wire::PacketRecord&)> observer;
};

struct RunResult {
    std::vector<ProbeCapture> captures;
    GroundTruthJournal journal;
    std::string settings_text;
    std::vector<wire::PacketRecord> records;  // keep_in_memory only
};

// Runs the scenario (all trace jobs when present) and produces captures, the
// ground-truth journal and the settings report.
RunResult run_scenario(const topo::Topology& t, const cfg::ScenarioConfig& scenario, u64 seed,
                       const RunOptions& options = {});

}  // namespace iotsynth::engine
