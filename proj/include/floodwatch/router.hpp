#pragma once

#include "floodwatch/message.hpp"
#include "floodwatch/query.hpp"
#include "floodwatch/text.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace floodwatch {

/// Compiled form of a StreamQuery for repeated matching.
class QueryMatcher {
public:
    explicit QueryMatcher(const StreamQuery& query);

    /// Sorted, unique ids of every event the message belongs to.
    std::vector<std::string> match(const Message& msg) const;

    /// Same result for a pre-tokenized text.
    std::vector<std::string> match(const Message& msg, const std::vector<std::string>& tokens) const;

private:
    const StreamQuery* query_;
    text::PhraseIndex keywords_;
};

/// Event ids the message is routed to: inside an owned box, or an owned
/// keyword occurring as a whole word (case-insensitive; hashtags count,
/// mentions and URLs do not).
std::vector<std::string> match_events(const Message& msg, const StreamQuery& query);

/// Newline-delimited message records from a file, stdin ("-") or a TCP
/// endpoint ("tcp://host:port"). Only one source may be open at a time.
class ReplaySource {
public:
    explicit ReplaySource(const std::string& location);
    ~ReplaySource();
    ReplaySource(const ReplaySource&) = delete;
    ReplaySource& operator=(const ReplaySource&) = delete;

    /// Next well-formed message; malformed lines are counted and skipped.
    std::optional<Message> next();

    std::size_t lines_read() const { return lines_; }
    std::size_t skipped() const { return skipped_; }

private:
    bool read_line(std::string& line);

    std::ifstream file_;
    int socket_ = -1;
    bool use_stdin_ = false;
    std::string buffer_;
    bool eof_ = false;
    std::size_t lines_ = 0;
    std::size_t skipped_ = 0;
};

class MessageSink {
public:
    virtual ~MessageSink() = default;
    virtual void append(const std::string& event_id, const Message& msg) = 0;
    virtual void flush() {}
};

/// Appends to `<state>/events/<event_id>/raw.ndjson`.
class EventFileSink : public MessageSink {
public:
    explicit EventFileSink(std::filesystem::path state_dir);
    void append(const std::string& event_id, const Message& msg) override;
    void flush() override;

private:
    std::filesystem::path root_;
    std::map<std::string, std::ofstream> files_;
};

class MemorySink : public MessageSink {
public:
    void append(const std::string& event_id, const Message& msg) override {
        records.emplace_back(event_id, msg);
    }
    std::vector<std::pair<std::string, Message>> records;
};

struct RoutingReport {
    std::size_t input = 0;
    std::size_t routed = 0;   ///< messages with at least one event
    std::size_t dropped = 0;  ///< messages with no event
    std::size_t appends = 0;
    std::map<std::string, std::size_t> per_event;

    /// Associative merge of partial reports.
    RoutingReport& operator+=(const RoutingReport& other);
};

/// Raised when the sink fails; carries what was routed before the failure.
class RoutingError : public StageError {
public:
    RoutingError(const std::string& what, RoutingReport partial)
        : StageError(what), partial_(std::move(partial)) {}
    const RoutingReport& partial() const { return partial_; }

private:
    RoutingReport partial_;
};

enum class Execution { serial, parallel };

/// Routes a batch: matching may run in parallel, appends are issued in input order.
RoutingReport route(std::span<const Message> messages, const StreamQuery& query, MessageSink& sink,
                    Execution exec = Execution::parallel);

/// Streams the whole source through the query in fixed-size batches.
RoutingReport route(ReplaySource& source, const StreamQuery& query, MessageSink& sink,
                    Execution exec = Execution::parallel, std::size_t batch_size = 4096);

}  // namespace floodwatch
