#pragma once

#include "qkg/protocol.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace qkg::cli {

/// Line-delimited transcript persistence. One record per session in a
/// fixed field order, bitstrings in the canonical ASCII encoding, empty
/// sequences written as "-". Comment lines start with '#'; the generator
/// timestamp lives in one of them so record bytes stay deterministic.

void write_transcripts(std::ostream& out, const std::vector<SessionTranscript>& transcripts,
                       bool with_header = true);
void write_transcripts_file(const std::string& path,
                            const std::vector<SessionTranscript>& transcripts,
                            bool with_header = true);

std::vector<SessionTranscript> read_transcripts(std::istream& in);
std::vector<SessionTranscript> read_transcripts_file(const std::string& path);

std::string format_transcript(const SessionTranscript& t);
SessionTranscript parse_transcript(const std::string& line);

/// Re-derive sifting, QBER and the accounting from the stored raw data;
/// returns one message per violated check (empty = transcript valid).
std::vector<std::string> verify_transcript(const SessionTranscript& t);

} // namespace qkg::cli
