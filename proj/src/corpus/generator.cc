#include "corpus/generator.h"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include "common/datetime.h"
#include "common/error.h"

namespace preply::corpus {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::size_t kEmotional = 0;
constexpr std::size_t kNeutral = 1;
constexpr std::size_t kReserved = 2;
constexpr std::size_t kTerse = 0;
constexpr std::size_t kVerbose = 1;

// Reply text per [register][verbosity]. Register rows follow the three
// personalities of the classic "emotional / neutral / reserved" contrast:
// emotional replies carry intensified sentiment, neutral ones a single
// sentiment word, reserved ones little or none. Every reply stays within two
// sentences and 25 tokens so that its thread labels as answerable.
using ReplyTable = std::array<std::array<std::string_view, 2>, kRegisterCount>;

constexpr ReplyTable kAcceptMeeting = {{
    {"So excited! See you {Day}!",
     "I am dying to meet you; see you on {Day}, it will be absolutely wonderful!"},
    {"Sounds good, see you {Day}.",
     "I would like to meet you. See you on {Day}, that sounds good."},
    {"Ok. {Day} works.",
     "We should meet. I will see you on {Day} at the usual place then."},
}};

constexpr ReplyTable kDeclineMeeting = {{
    {"So sorry; can't make it!",
     "I am terribly sorry; I can't make it, which is really disappointing for me."},
    {"Sorry; I can't make it.",
     "Sorry; I can't make it this time, maybe we can find another slot next week."},
    {"Sorry; I can't.", "Sorry; I can't, let us find another time later in the month."},
}};

constexpr ReplyTable kStatusReply = {{
    {"Going really great!",
     "It is going amazingly well! We are way ahead of schedule and I am so thrilled."},
    {"Going well.",
     "It is going well. We should finish the remaining work by the end of the week."},
    {"On track.", "It is on track. I will share an update with the team soon."},
}};

constexpr ReplyTable kApprovalReply = {{
    {"Absolutely love it. Approved!",
     "This is mind blowing. I am approving this right away, absolutely fantastic work!"},
    {"Very good. Approved.",
     "Looks good. Approved, please go ahead with the plan as discussed."},
    {"Ok. Will see.", "Ok, will see. I need a bit more time to review the details first."},
}};

constexpr ReplyTable kSocialReply = {{
    {"So excited; let's go!",
     "I am free as a bird; let's go and have a really wonderful time together!"},
    {"I am free; let's go.", "I am free; let's go, it should be a nice evening with everyone."},
    {"Ok. Let's go.", "Ok. Let's go, I can join you for an hour or so."},
}};

constexpr ReplyTable kNewsReply = {{
    {"Wow, absolutely amazing news!",
     "This is one hell of a news that is worth celebrating, I am so happy for everyone!"},
    {"Great to hear.", "Great to hear. Please pass my regards to the whole team."},
    {"Nice!", "Noted. The team did what was expected on this one."},
}};

constexpr std::array<std::string_view, 5> kWeekdays = {"Monday", "Tuesday", "Wednesday",
                                                       "Thursday", "Friday"};
constexpr std::array<std::string_view, 4> kTopics = {"the budget", "the project plan",
                                                     "the roadmap", "the launch"};
constexpr std::array<std::string_view, 3> kMeals = {"lunch", "coffee", "dinner"};
constexpr std::array<std::string_view, 4> kProjects = {"the migration", "the report",
                                                       "the website redesign",
                                                       "the client project"};
constexpr std::array<std::string_view, 3> kPersonalProjects = {
    "the new house", "your training", "the garden"};
constexpr std::array<std::string_view, 5> kDocs = {"the budget request", "the travel request",
                                                   "the hiring plan", "the new design",
                                                   "the vendor contract"};
constexpr std::array<std::string_view, 5> kEvents = {"the concert", "the game", "the party",
                                                     "the movie", "the hike"};
constexpr std::array<std::string_view, 5> kNews = {
    "we won the contract", "the launch was a success", "my sister got engaged",
    "we closed the deal", "the team hit the target"};

constexpr std::array<std::string_view, 4> kSchedulingWork = {
    "Can we meet on {Day} to discuss {topic}?",
    "Are you free on {Day} for a quick call about {topic}?",
    "Could we meet {Day} to go over {topic}?",
    "Would {Day} work for a meeting about {topic}?"};
constexpr std::array<std::string_view, 2> kSchedulingPersonal = {
    "Are you free for {meal} on {Day}?", "Can we meet for {meal} on {Day}?"};
constexpr std::array<std::string_view, 3> kStatusWork = {
    "How is {project} going?", "What is the status of {project}?", "Is {project} on track?"};
constexpr std::array<std::string_view, 1> kStatusPersonal = {"How is {pproject} going?"};
constexpr std::array<std::string_view, 3> kApprovalRequests = {
    "Can you approve {doc}?", "Could you please review and approve {doc}?",
    "Please approve {doc} when you can."};
constexpr std::array<std::string_view, 3> kSocialRequests = {
    "Do you want to go to {event} with us?", "Are you coming to {event}?",
    "Want to join us for {event} this weekend?"};
constexpr std::array<std::string_view, 2> kNewsRequests = {"Did you hear that {news}?",
                                                           "Have you heard that {news}?"};

constexpr std::array<std::string_view, 8> kOpeners = {
    "I hope you are doing well.",
    "The report is attached.",
    "I finished the draft yesterday.",
    "We met the client last week.",
    "The numbers look better than expected.",
    "The meeting notes are in the shared folder.",
    "It was good to see you at the party.",
    "The weather has been lovely."};

constexpr std::array<std::string_view, 8> kInformational = {
    "The office will be closed on {Day} for maintenance.",
    "The quarterly newsletter is now available on the intranet.",
    "This is a reminder that timesheets are due at the end of the month.",
    "The server upgrade finished without issues.",
    "Our team lunch photos are now online.",
    "The cafeteria menu has changed for the summer.",
    "The new parking rules start next month.",
    "The security training is mandatory for all staff."};

constexpr std::array<std::string_view, 5> kOpenEnded = {
    "Can you walk me through the detailed plan for the migration and the main risks?",
    "Could you explain the reasons behind the delay and what we should tell the client?",
    "What do you think about the proposed changes to the architecture and the hiring plan?",
    "Can you write up a summary of the customer feedback and your recommendations?",
    "How should we restructure the support process before the next release?"};

constexpr std::array<std::string_view, 10> kLongReplySentences = {
    "The migration has three phases and the first one moves the database.",
    "The main risk is the data transfer during the weekend window.",
    "I will send a detailed document with the full timeline tomorrow.",
    "We should also review the budget with the finance team.",
    "The client needs a clear explanation and a realistic new date.",
    "Most of the feedback was about the onboarding flow and the pricing page.",
    "I think we need two more engineers to cover the support load.",
    "The architecture changes make sense but they will take some time.",
    "Let me know if you want to go through the numbers together.",
    "There are a few open questions that we should settle first."};

constexpr std::array<std::string_view, 4> kWorkSenders = {"mark", "nina", "oscar", "paula"};
constexpr std::array<std::string_view, 4> kPersonalSenders = {"quinn", "rita", "sam", "tina"};
constexpr std::array<std::string_view, 4> kRequestGreetings = {"Hi", "Hello", "Hey", "Dear"};
constexpr std::array<std::string_view, 4> kRequestClosings = {"Thanks,", "Best regards,",
                                                              "Cheers,", "Regards,"};

enum class ThreadKind { kAnswerable, kInformational, kOpenEnded };
enum class Category { kScheduling, kStatus, kApproval, kSocial, kNews };

template <typename Array>
std::string_view pick(const Array& items, nn::Rng& rng) {
  return items[static_cast<std::size_t>(rng.below(items.size()))];
}

std::string capitalized(std::string_view s) {
  std::string out(s);
  if (!out.empty() && out[0] >= 'a' && out[0] <= 'z') out[0] = static_cast<char>(out[0] - 32);
  return out;
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos;
       pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

struct Slots {
  std::string day;
  std::string topic;
  std::string meal;
  std::string project;
  std::string pproject;
  std::string doc;
  std::string event;
  std::string news;
};

Slots draw_slots(nn::Rng& rng) {
  Slots s;
  s.day = std::string(pick(kWeekdays, rng));
  s.topic = std::string(pick(kTopics, rng));
  s.meal = std::string(pick(kMeals, rng));
  s.project = std::string(pick(kProjects, rng));
  s.pproject = std::string(pick(kPersonalProjects, rng));
  s.doc = std::string(pick(kDocs, rng));
  s.event = std::string(pick(kEvents, rng));
  s.news = std::string(pick(kNews, rng));
  return s;
}

std::string fill(std::string_view templ, const Slots& s) {
  std::string out(templ);
  replace_all(out, "{Day}", s.day);
  replace_all(out, "{topic}", s.topic);
  replace_all(out, "{meal}", s.meal);
  replace_all(out, "{project}", s.project);
  replace_all(out, "{pproject}", s.pproject);
  replace_all(out, "{doc}", s.doc);
  replace_all(out, "{event}", s.event);
  replace_all(out, "{news}", s.news);
  return out;
}

// Lowercase alphanumeric code that never appears in the dictionary
// ("qx7z"); exercises non-dictionary filtering.
std::string noise_code(nn::Rng& rng) {
  static constexpr std::string_view kConsonants = "bcdfghjklmnpqrstvwxz";
  static constexpr std::string_view kDigits = "23456789";
  std::string code;
  code += kConsonants[rng.below(kConsonants.size())];
  code += kConsonants[rng.below(kConsonants.size())];
  code += kDigits[rng.below(kDigits.size())];
  code += kConsonants[rng.below(kConsonants.size())];
  code += kDigits[rng.below(kDigits.size())];
  return code;
}

struct Request {
  Category category;
  RecipientType recipient;
  std::string sentence;
};

Request draw_request(nn::Rng& rng, const Slots& slots) {
  static constexpr std::array<double, 5> kCategoryWeights = {0.30, 0.20, 0.20, 0.15, 0.15};
  const auto category = static_cast<Category>(rng.categorical(kCategoryWeights));
  Request r{category, RecipientType::kWork, {}};
  switch (category) {
    case Category::kScheduling:
      if (rng.bernoulli(0.6)) {
        r.sentence = fill(pick(kSchedulingWork, rng), slots);
      } else {
        r.recipient = RecipientType::kPersonal;
        r.sentence = fill(pick(kSchedulingPersonal, rng), slots);
      }
      break;
    case Category::kStatus:
      if (rng.bernoulli(0.7)) {
        r.sentence = fill(pick(kStatusWork, rng), slots);
      } else {
        r.recipient = RecipientType::kPersonal;
        r.sentence = fill(pick(kStatusPersonal, rng), slots);
      }
      break;
    case Category::kApproval:
      r.sentence = fill(pick(kApprovalRequests, rng), slots);
      break;
    case Category::kSocial:
      r.recipient = RecipientType::kPersonal;
      r.sentence = fill(pick(kSocialRequests, rng), slots);
      break;
    case Category::kNews:
      if (rng.bernoulli(0.5)) r.recipient = RecipientType::kPersonal;
      r.sentence = fill(pick(kNewsRequests, rng), slots);
      break;
  }
  return r;
}

std::string draw_reply_text(Category category, const SyntheticPersona& persona,
                            const Slots& slots, nn::Rng& rng) {
  const std::size_t reg = rng.categorical(persona.template_weights);
  const std::size_t verb = persona.verbosity == Verbosity::kTerse ? kTerse : kVerbose;
  switch (category) {
    case Category::kScheduling: {
      const bool accept = rng.bernoulli(0.7);
      return fill((accept ? kAcceptMeeting : kDeclineMeeting)[reg][verb], slots);
    }
    case Category::kStatus: return fill(kStatusReply[reg][verb], slots);
    case Category::kApproval: return fill(kApprovalReply[reg][verb], slots);
    case Category::kSocial: return fill(kSocialReply[reg][verb], slots);
    case Category::kNews: return fill(kNewsReply[reg][verb], slots);
  }
  return {};
}

std::string wrap_body(std::string_view greeting_name, std::string text,
                      std::string_view signer, nn::Rng& rng, double p_greeting,
                      double p_closing) {
  std::string body;
  if (rng.bernoulli(p_greeting)) {
    body += std::string(pick(kRequestGreetings, rng)) + " " + capitalized(greeting_name) + ",\n";
  }
  body += text;
  if (rng.bernoulli(p_closing)) {
    body += "\n" + std::string(pick(kRequestClosings, rng)) + "\n" + capitalized(signer);
  }
  return body;
}

std::string join_sentences(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += ' ';
    out += p;
  }
  return out;
}

std::string subject_for(ThreadKind kind, Category category) {
  if (kind == ThreadKind::kInformational) return "FYI";
  if (kind == ThreadKind::kOpenEnded) return "Need your input";
  switch (category) {
    case Category::kScheduling: return "Meeting";
    case Category::kStatus: return "Status";
    case Category::kApproval: return "Approval needed";
    case Category::kSocial: return "Plans";
    case Category::kNews: return "News";
  }
  return "";
}

}  // namespace

std::string_view to_string(Verbosity v) { return v == Verbosity::kTerse ? "terse" : "verbose"; }

std::string_view to_string(Emotionality e) {
  switch (e) {
    case Emotionality::kEmotional: return "emotional";
    case Emotionality::kNeutral: return "neutral";
    case Emotionality::kReserved: return "reserved";
  }
  return "neutral";
}

SyntheticPersona make_persona(std::string name, Verbosity v, Emotionality e,
                              double dominant_weight) {
  require(dominant_weight > 0.0 && dominant_weight <= 1.0, ErrorCode::kInvalidArgument,
          "make_persona: dominant weight must be in (0, 1]");
  SyntheticPersona p;
  p.name = std::move(name);
  p.verbosity = v;
  p.emotionality = e;
  const double rest = (1.0 - dominant_weight) / static_cast<double>(kRegisterCount - 1);
  p.template_weights.fill(rest);
  p.template_weights[static_cast<std::size_t>(e)] = dominant_weight;
  return p;
}

std::vector<SyntheticPersona> default_personas(std::size_t count) {
  static constexpr std::array<std::string_view, 12> kNames = {
      "alice", "bob", "carol", "dave", "erin", "frank",
      "grace", "heidi", "ivan", "judy", "ken", "laura"};
  // Terse/verbose alternate; emotionality cycles reserved, emotional,
  // neutral so the first two users already contrast on both axes.
  static constexpr std::array<Emotionality, 3> kCycle = {
      Emotionality::kReserved, Emotionality::kEmotional, Emotionality::kNeutral};
  require(count >= 2 && count <= kNames.size(), ErrorCode::kInvalidArgument,
          "default_personas: count must be in [2, 12]");
  std::vector<SyntheticPersona> out;
  for (std::size_t i = 0; i < count; ++i) {
    const Verbosity v = i % 2 == 0 ? Verbosity::kTerse : Verbosity::kVerbose;
    out.push_back(make_persona(std::string(kNames[i]), v, kCycle[(i + i / 6) % 3]));
  }
  return out;
}

ordered_json personas_to_json(const std::vector<SyntheticPersona>& personas) {
  ordered_json arr = ordered_json::array();
  for (const auto& p : personas) {
    arr.push_back({{"name", p.name},
                   {"verbosity", to_string(p.verbosity)},
                   {"emotionality", to_string(p.emotionality)},
                   {"template_weights", p.template_weights}});
  }
  return arr;
}

std::vector<SyntheticPersona> personas_from_json(const json& doc) {
  std::vector<SyntheticPersona> out;
  try {
    for (const auto& item : doc) {
      SyntheticPersona p;
      p.name = item.at("name").get<std::string>();
      const auto v = item.at("verbosity").get<std::string>();
      require(v == "terse" || v == "verbose", ErrorCode::kParse, "bad verbosity '" + v + "'");
      p.verbosity = v == "terse" ? Verbosity::kTerse : Verbosity::kVerbose;
      const auto e = item.at("emotionality").get<std::string>();
      if (e == "emotional") {
        p.emotionality = Emotionality::kEmotional;
      } else if (e == "neutral") {
        p.emotionality = Emotionality::kNeutral;
      } else if (e == "reserved") {
        p.emotionality = Emotionality::kReserved;
      } else {
        fail(ErrorCode::kParse, "bad emotionality '" + e + "'");
      }
      const auto w = item.at("template_weights").get<std::vector<double>>();
      require(w.size() == kRegisterCount, ErrorCode::kParse,
              "template_weights must have 3 entries");
      double total = 0.0;
      for (std::size_t i = 0; i < kRegisterCount; ++i) {
        require(w[i] >= 0.0, ErrorCode::kParse, "template_weights must be non-negative");
        p.template_weights[i] = w[i];
        total += w[i];
      }
      require(std::abs(total - 1.0) <= 1e-9, ErrorCode::kParse,
              "template_weights for '" + p.name + "' must sum to 1");
      out.push_back(std::move(p));
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, std::string("malformed personas: ") + e.what());
  }
  return out;
}

std::size_t expected_email_count(std::size_t personas, std::size_t threads_per_user) {
  const std::size_t informational = threads_per_user / 4;
  return personas * (2 * threads_per_user - informational);
}

std::vector<Email> generate_corpus(const std::vector<SyntheticPersona>& personas,
                                   std::size_t threads_per_user, nn::Rng& rng) {
  require(personas.size() >= 2, ErrorCode::kInvalidArgument,
          "generate_corpus: need at least 2 personas");
  for (const auto& p : personas) {
    double total = 0.0;
    for (double w : p.template_weights) total += w;
    require(std::abs(total - 1.0) <= 1e-9, ErrorCode::kInvalidArgument,
            "persona '" + p.name + "' template_weights must sum to 1");
  }

  // Exact per-user allocation keeps the answerable share at 50% (+/- one
  // thread) regardless of seed.
  const std::size_t n_info = threads_per_user / 4;
  const std::size_t n_open = threads_per_user / 2 - n_info;
  std::vector<std::vector<ThreadKind>> plans;
  for (std::size_t u = 0; u < personas.size(); ++u) {
    std::vector<ThreadKind> plan(threads_per_user, ThreadKind::kAnswerable);
    std::fill_n(plan.begin(), n_info, ThreadKind::kInformational);
    std::fill_n(plan.begin() + static_cast<std::ptrdiff_t>(n_info), n_open,
                ThreadKind::kOpenEnded);
    rng.shuffle(std::span<ThreadKind>(plan));
    plans.push_back(std::move(plan));
  }

  const Timestamp base = parse_timestamp("2024-01-01T08:00");
  std::vector<Email> emails;
  std::size_t global_index = 0;
  for (std::size_t t = 0; t < threads_per_user; ++t) {
    for (std::size_t u = 0; u < personas.size(); ++u, ++global_index) {
      const SyntheticPersona& persona = personas[u];
      const ThreadKind kind = plans[u][t];
      const Slots slots = draw_slots(rng);

      Email req;
      const std::string seq = std::to_string(t);
      req.id = persona.name + "-" + std::string(seq.size() < 4 ? 4 - seq.size() : 0, '0') + seq;
      req.to = {persona.name + "@example.com"};
      req.timestamp = format_timestamp(
          from_minutes(to_minutes(base) + static_cast<std::int64_t>(global_index) * 37));

      Category category = Category::kStatus;
      std::vector<std::string> sentences;
      if (rng.bernoulli(0.5)) sentences.emplace_back(pick(kOpeners, rng));
      switch (kind) {
        case ThreadKind::kAnswerable: {
          Request r = draw_request(rng, slots);
          category = r.category;
          req.recipient_type = r.recipient;
          sentences.push_back(std::move(r.sentence));
          break;
        }
        case ThreadKind::kInformational: {
          req.recipient_type = rng.bernoulli(0.8) ? RecipientType::kWork
                                                  : RecipientType::kPersonal;
          const std::size_t n = 1 + rng.below(3);
          for (std::size_t i = 0; i < n; ++i) sentences.push_back(fill(pick(kInformational, rng), slots));
          break;
        }
        case ThreadKind::kOpenEnded:
          req.recipient_type = RecipientType::kWork;
          sentences.emplace_back(pick(kOpenEnded, rng));
          break;
      }
      if (rng.bernoulli(0.2)) sentences.push_back("Reference " + noise_code(rng) + ".");

      const auto& senders =
          req.recipient_type == RecipientType::kWork ? kWorkSenders : kPersonalSenders;
      const std::string sender(pick(senders, rng));
      req.from = sender + "@example.com";
      req.subject = subject_for(kind, category);
      req.body = wrap_body(persona.name, join_sentences(sentences), sender, rng, 0.8, 0.8);

      std::optional<Email> reply;
      if (kind != ThreadKind::kInformational) {
        Email rep;
        rep.id = req.id + "-r";
        rep.from = persona.name + "@example.com";
        rep.to = {req.from};
        rep.recipient_type = req.recipient_type;
        rep.subject = "Re: " + req.subject;
        rep.in_reply_to = req.id;
        rep.timestamp = format_timestamp(
            from_minutes(to_minutes(parse_timestamp(req.timestamp)) + 30 +
                         static_cast<std::int64_t>(rng.below(150))));
        std::string text;
        if (kind == ThreadKind::kAnswerable) {
          text = draw_reply_text(category, persona, slots, rng);
        } else {
          std::vector<std::string> parts;
          const std::size_t n = 3 + rng.below(2);
          for (std::size_t i = 0; i < n; ++i) parts.emplace_back(pick(kLongReplySentences, rng));
          text = join_sentences(parts);
        }
        rep.body = wrap_body(sender, std::move(text), persona.name, rng, 0.3, 0.3);
        reply = std::move(rep);
      }
      emails.push_back(std::move(req));
      if (reply) emails.push_back(std::move(*reply));
    }
  }
  return emails;
}

std::vector<LabeledSentence> generate_labeled_sentences(std::size_t n, nn::Rng& rng) {
  const std::size_t half = n / 2;
  std::vector<LabeledSentence> out;
  out.reserve(2 * half);
  for (std::size_t i = 0; i < half; ++i) {
    const Slots slots = draw_slots(rng);
    if (rng.bernoulli(0.85)) {
      out.push_back({draw_request(rng, slots).sentence, 1});
    } else {
      out.push_back({std::string(pick(kOpenEnded, rng)), 1});
    }
    const double r = rng.uniform();
    std::string other;
    if (r < 0.35) {
      other = std::string(pick(kOpeners, rng));
    } else if (r < 0.6) {
      other = fill(pick(kInformational, rng), slots);
    } else if (r < 0.8) {
      other = std::string(pick(kLongReplySentences, rng));
    } else {
      other = capitalized(slots.news) + ".";
    }
    out.push_back({std::move(other), 0});
  }
  rng.shuffle(std::span<LabeledSentence>(out));
  return out;
}

std::string labeled_sentences_to_jsonl(const std::vector<LabeledSentence>& sentences) {
  std::string out;
  for (const auto& s : sentences) {
    ordered_json obj;
    obj["text"] = s.text;
    obj["label"] = s.label;
    out += obj.dump();
    out += '\n';
  }
  return out;
}

std::vector<LabeledSentence> parse_labeled_sentences(std::string_view jsonl) {
  std::vector<LabeledSentence> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < jsonl.size()) {
    std::size_t end = jsonl.find('\n', start);
    if (end == std::string_view::npos) end = jsonl.size();
    std::string_view line = jsonl.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      const json obj = json::parse(line);
      LabeledSentence s{obj.at("text").get<std::string>(), obj.at("label").get<int>()};
      require(s.label == 0 || s.label == 1, ErrorCode::kParse, "label must be 0 or 1");
      out.push_back(std::move(s));
    } catch (const json::exception& e) {
      fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      fail(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

ordered_json calendar_fixture() {
  return ordered_json::array({
      {{"title", "Team standup"}, {"start", "2024-01-04T09:30"}, {"end", "2024-01-04T10:00"}},
      {{"title", "Offsite workshop"}, {"start", "2024-01-05T09:00"}, {"end", "2024-01-05T17:00"}},
      {{"title", "Dentist"}, {"start", "2024-01-08T13:00"}, {"end", "2024-01-08T14:00"}},
      {{"title", "Quarterly review"}, {"start", "2024-01-09T14:00"}, {"end", "2024-01-09T16:00"}},
  });
}

}  // namespace preply::corpus
