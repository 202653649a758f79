#include "hints/prompts.hpp"

#include <array>
#include <algorithm>
#include <cctype>

#include "hints/error.hpp"

namespace hints {

std::string_view to_string(Domain domain) noexcept { return domain == Domain::news ? "news" : "papers"; }

Domain parse_domain(std::string_view text) {
    if (text == "news") return Domain::news;
    if (text == "papers") return Domain::papers;
    throw ConfigError("unknown domain '" + std::string(text) + "'", {{"domain", text}});
}

std::string_view to_string(PromptId id) noexcept {
    switch (id) {
        case PromptId::summarize: return "summarize";
        case PromptId::extract_event: return "extract_event";
        case PromptId::extract_keywords: return "extract_keywords";
        case PromptId::keyword_explanation: return "keyword_explanation";
        case PromptId::keyword_unify: return "keyword_unify";
        case PromptId::label_bottom: return "label_bottom";
        case PromptId::label_intermediate: return "label_intermediate";
        case PromptId::label_keywords: return "label_keywords";
    }
    return "unknown";
}

namespace {

ChatMessage sys(std::string content, std::string name = {}) { return {"system", std::move(content), std::move(name)}; }
ChatMessage usr(std::string content) { return {"user", std::move(content), {}}; }

std::vector<PromptTemplate> build_templates() {
    std::vector<PromptTemplate> t;

    // summarize
    t.push_back({PromptId::summarize, Domain::news,
                 {sys("You are a summarization system that summarizes events happened between the main keywords of "
                      "a news article. The user will provide you with a news article to summarize.\n"
                      "Try to summarize the article with no more than three sentences.\n"
                      "Reply starts with 'The article discussed ...'"),
                  usr("{content}")}});
    t.push_back({PromptId::summarize, Domain::papers,
                 {sys("You are a summarization system for visualization research papers. The user will provide you "
                      "with the abstract of a paper to summarize.\n"
                      "Try to summarize the paper with no more than three sentences.\n"
                      "Reply starts with 'The paper discussed ...'"),
                  usr("{content}")}});

    // extract_event
    for (Domain d : {Domain::news, Domain::papers}) {
        const std::string source = d == Domain::news ? "news articles" : "research paper abstracts";
        const std::string item = d == Domain::news ? "article" : "paper";
        t.push_back({PromptId::extract_event, d,
                     {sys("You are a state-of-the-art event extraction system. Your task is to extract only the "
                          "most important event from " + source + ".\n"
                          "Strictly extract only one event. This event should be the most important event in the " +
                          item + ". Also extract the trigger that indicates the occurrence of the event.\n"
                          "The events should be human-readable. Reply in this format: [event - trigger]"),
                      usr(d == Domain::news ? "This is the news article:{summary}" : "This is the paper:{summary}")}});
    }

    // extract_keywords
    t.push_back({PromptId::extract_keywords, Domain::news,
                 {sys("You are a named entity recognition model. You will be given an article and the event "
                      "recognized in that article by the user.\n"
                      "The format of the input defining event in article will be: [event - category];\n"
                      "Extract the main characters involved in that event. The number of main characters should be "
                      "{max_keywords} or less strictly. Ignore any other characters. Be as concise as possible.\n"
                      "Reply with the following format: [character 1],[character 2] ..."),
                  sys("Article: The article discussed the extensive history of doping in Russia, dating back to the "
                      "1983 Soviet Union's detailed instructions to inject top athletes with anabolic steroids in "
                      "order to ensure dominance at the Los Angeles Olympics.\n"
                      "Event: [Russia's doping scandal - sports scandal]",
                      "example_user"),
                  sys("[Russia], [Dr.Sergei]", "example_system"),
                  usr("Article: {summary} Event: {event}")}});
    t.push_back({PromptId::extract_keywords, Domain::papers,
                 {sys("You are a keyword extraction model for visualization research. You will be given a paper "
                      "summary and the main contribution recognized in it by the user.\n"
                      "The format of the input defining the contribution will be: [contribution - category];\n"
                      "Extract the main techniques, tasks, or data types involved in that contribution. The number "
                      "of keywords should be {max_keywords} or less strictly. Be as concise as possible.\n"
                      "Reply with the following format: [keyword 1],[keyword 2] ..."),
                  usr("Article: {summary} Event: {event}")}});

    // keyword_explanation
    t.push_back({PromptId::keyword_explanation, Domain::news,
                 {sys("You are a knowledgeable news assistant. Explain the keyword given by the user in a few "
                      "sentences."),
                  usr("What is {keyword}?")}});
    t.push_back({PromptId::keyword_explanation, Domain::papers,
                 {sys("You are a knowledgeable visualization research assistant. Explain the keyword given by the "
                      "user in a few sentences."),
                  usr("What is {keyword}?")}});

    // keyword_unify: one shape for both domains
    for (Domain d : {Domain::news, Domain::papers}) {
        const std::string source = d == Domain::news ? "news articles" : "research paper abstracts";
        t.push_back({PromptId::keyword_unify, d,
                     {sys("User will provide a list of keywords from " + source + ".\n"
                          "The input will be in the format: keyword 1, keyword 2, ...\n"
                          "Which phrase would best describe the list of keywords?\n"
                          "The phrase should be very specific and similar to the keywords and less than 5 words. "
                          "If the words are too similar to each other, simply assign one of the words as the topic.\n"
                          "Strictly assign one topic to a list of keywords.\n"
                          "Reply in the format: [topic]"),
                      sys("[storytelling, data storytelling]", "example_user"),
                      sys("[data storytelling]", "example_system"),
                      usr("[{keywords}]")}});
    }

    // label_bottom
    t.push_back({PromptId::label_bottom, Domain::news,
                 {sys("You are a news article summarization system.\n"
                      "The user will provide you with a set of summarized news articles, your job is to further "
                      "summarize them into one noun phrase.\n"
                      "Use words that are already in the articles, and try to use as few words as possible."),
                  sys("Article 1: The article discussed an engineering company that creates mobile research robots "
                      "for the military, which released a new video showcasing the next generation of its humanoid "
                      "robot.\n"
                      "Article 2: The article discussed the rise of robots and artificial intelligence in various "
                      "industries, including commercial drone delivery and the testing of driverless vehicles.",
                      "example_user"),
                  sys("Robotic Advancements and Concerns", "example_system"),
                  usr("{articles}")}});
    t.push_back({PromptId::label_bottom, Domain::papers,
                 {sys("You are a visualization research paper summarization system. The user will provide you with "
                      "a set of abstracts of visualization research papers. They are manually categorized by another "
                      "person, so they are discussing the same topic. Your job is to find out what that topic is.\n"
                      "Reply with less than five words."),
                  sys("Abstract 1: Many datasets such as scientific literature collections contain multiple "
                      "heterogeneous facets which derive implicit relations.\n"
                      "Abstract 2: We present PivotPaths, an interactive visualization for exploring faceted "
                      "information resources.",
                      "example_user"),
                  sys("Faceted browsing visualization", "example_system"),
                  usr("{articles}")}});

    // label_intermediate
    t.push_back({PromptId::label_intermediate, Domain::news,
                 {sys("You are a news article categorization system.\n"
                      "The user will provide you with a list of sub-topics of news articles and a few examples from "
                      "the sub-topics. Your job is to further categorize the sub-topics into a single noun phrase "
                      "that best summarizes all the sub-topics. Try to reuse the words in the examples."),
                  sys("Sub-Topics: Increasing Gun Violence in Chicago, Crime Rates and Policing Tactics, "
                      "Misconceptions about Crime in the United States, Global Events\n"
                      "Article 1: The article discussed the major events of 2016, including several attacks "
                      "overseas.\n"
                      "Article 2: The article discussed how serious crimes in the city increased last year while the "
                      "number of arrests decreased.",
                      "example_user"),
                  sys("Crimes in the United States", "example_system"),
                  usr("Sub-Topics: {sub_topics}\n{articles}")}});
    t.push_back({PromptId::label_intermediate, Domain::papers,
                 {sys("You are a visualization research paper summarization system.\n"
                      "You generate topics for a set of visualization research papers.\n"
                      "The user will provide you with a list of sub-topics and a few example abstracts from the "
                      "sub-topics. Your job is to further categorize the sub-topics into a single noun phrase that "
                      "best summarizes all the sub-topics. Try to reuse the words in the sub-topics. Reply with a "
                      "single noun phrase without any line breaks. Be concise."),
                  sys("Sub-Topics: Underwater 3D scene reconstruction from acoustic imaging sonar data, "
                      "Visualization of Sound Propagation in Room Acoustics, Underwater seabed visualization;\n"
                      "Abstract 1: The development of a high speed multi-frequency continuous scan sonar has "
                      "resulted in the acquisition of extremely accurate bathymetric data.",
                      "example_user"),
                  sys("Visualization of Underwater Acoustic Scenes and Sound Propagation", "example_system"),
                  usr("Sub-Topics: {sub_topics}\n{articles}")}});

    // label_keywords
    t.push_back({PromptId::label_keywords, Domain::news,
                 {sys("You are an entity summarization system.\n"
                      "The user will provide you with a list of entities, they can be people, places, or things. The "
                      "user wants to get a gist of what entities are in the list.\n"
                      "First, split the entities into different categories.\n"
                      "Then, assign each category a human-readable name.\n"
                      "If entities in a category are all related to a specific entity, use that entity as the "
                      "category. Limit the number of categories to be less than 5 by keeping only the important "
                      "categories.\n"
                      "Reply with the following format: Category 1, Category 2, Category 3, ...\n"
                      "Do not reply more than 5 categories."),
                  sys("Entities: Refugee, Refugee camp, Internally displaced person, Asylum seeker", "example_user_1"),
                  sys("Refugee", "example_system_1"),
                  sys("Entities: JetBlue, American Airlines, Delta Airlines, Southwest Airlines, United Airlines, "
                      "Alaska Airlines",
                      "example_user_2"),
                  sys("US airline companies", "example_system_2"),
                  usr("Entities: {entities}")}});
    t.push_back({PromptId::label_keywords, Domain::papers,
                 {sys("You are a visualization research paper keyword summarization system.\n"
                      "The user will provide you with a list of keywords, they are terminologies in visualization "
                      "research papers. The user wants to get a gist of what keywords are in the list, but the list "
                      "is too long.\n"
                      "Pick out only a few keywords that best represents the list. Avoid picking out overlapping "
                      "keywords.\n"
                      "Limit the number of picked keywords to be less than 5 by keeping only the important ones.\n"
                      "Reply with the following format: Keyword_1, Keyword_2, Keyword_3, ..."),
                  usr("Keywords: {entities}")}});
    return t;
}

const std::vector<PromptTemplate>& all_templates() {
    static const std::vector<PromptTemplate> templates = build_templates();
    return templates;
}

bool slot_char(char c) { return std::islower(static_cast<unsigned char>(c)) || c == '_'; }

// Calls on_text for literal stretches and on_slot for each {slot}.
template <typename Text, typename Slot>
void scan(const std::string& s, Text on_text, Slot on_slot) {
    std::size_t i = 0;
    while (i < s.size()) {
        const std::size_t open = s.find('{', i);
        if (open == std::string::npos) {
            on_text(std::string_view(s).substr(i));
            return;
        }
        std::size_t close = open + 1;
        while (close < s.size() && slot_char(s[close])) ++close;
        if (close < s.size() && s[close] == '}' && close > open + 1) {
            on_text(std::string_view(s).substr(i, open - i));
            on_slot(s.substr(open + 1, close - open - 1));
            i = close + 1;
        } else {
            on_text(std::string_view(s).substr(i, open + 1 - i));
            i = open + 1;
        }
    }
}

}  // namespace

const PromptTemplate& prompt_template(PromptId id, Domain domain) {
    for (const auto& t : all_templates()) {
        if (t.id == id && t.domain == domain) return t;
    }
    throw ConfigError("missing prompt template");
}

std::vector<std::string> template_slots(const PromptTemplate& t) {
    std::vector<std::string> slots;
    for (const auto& m : t.messages) {
        scan(m.content, [](std::string_view) {},
             [&](const std::string& name) {
                 if (std::find(slots.begin(), slots.end(), name) == slots.end()) slots.push_back(name);
             });
    }
    return slots;
}

std::vector<ChatMessage> render(const PromptTemplate& t, const std::map<std::string, std::string>& slots) {
    std::vector<ChatMessage> out;
    out.reserve(t.messages.size());
    for (const auto& m : t.messages) {
        ChatMessage r{m.role, {}, m.name};
        scan(m.content, [&](std::string_view text) { r.content += text; },
             [&](const std::string& name) {
                 auto it = slots.find(name);
                 if (it == slots.end()) {
                     throw ConfigError("prompt slot '" + name + "' has no value",
                                       {{"template", to_string(t.id)}, {"slot", name}});
                 }
                 r.content += it->second;
             });
        out.push_back(std::move(r));
    }
    return out;
}

const PromptTemplate* identify_prompt(const std::vector<ChatMessage>& messages) {
    if (messages.empty()) return nullptr;
    for (const auto& t : all_templates()) {
        const std::string& head = t.messages.front().content;
        const auto slot = head.find('{');
        const std::string fixed = head.substr(0, slot);
        if (messages.front().role == "system" && messages.front().content.compare(0, fixed.size(), fixed) == 0 &&
            messages.size() == t.messages.size()) {
            return &t;
        }
    }
    return nullptr;
}

}  // namespace hints
