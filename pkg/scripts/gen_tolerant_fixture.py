#!/usr/bin/env python3
"""Regenerate tests/fixtures/tolerant/ServiceHub.java.

The fixture is a deterministic ~1kLOC file written in the style of a real
service codebase, deliberately full of constructs outside the parser's
subset (lambdas, anonymous classes, bounded generics, switch arrows, method
references, ternaries, varargs) to exercise tolerant mode.
"""
from pathlib import Path

HEADER = """\
package com.example.hub;

import java.io.PrintWriter;
import java.util.ArrayList;
import java.util.HashMap;
import java.util.List;
import java.util.Map;
import java.util.Optional;
import java.util.concurrent.ConcurrentHashMap;
import java.util.function.Function;
import java.util.stream.Collectors;

/**
 * Central dispatch hub: registries, retries, listeners and reporting.
 * Written against the real-world grab bag: lambdas, anonymous classes,
 * bounded generics, switch arrows, ternaries and varargs all appear here.
 */
public class ServiceHub {

    public static final int MAX_RETRIES = 5;
    private static final Map<String, Long> TIMINGS = new ConcurrentHashMap<>();

    private final Map<String, List<Handler>> handlers = new HashMap<>();
    private final List<Runnable> shutdownHooks = new ArrayList<>();
    private volatile boolean running;

    public interface Handler {
        Optional<String> handle(String topic, Map<String, Object> payload);

        default boolean accepts(String topic) {
            return topic != null && !topic.isEmpty();
        }
    }

    public enum Stage {
        INIT("cold"), WARMUP("tepid"), READY("hot"), DRAINING("cooling");

        private final String label;

        Stage(String label) {
            this.label = label;
        }

        public String label() {
            return label;
        }
    }

    public static <T extends Comparable<? super T>> T clamp(T value, T lo, T hi) {
        return value.compareTo(lo) < 0 ? lo : (value.compareTo(hi) > 0 ? hi : value);
    }

    public synchronized void register(String topic, Handler handler) {
        handlers.computeIfAbsent(topic, key -> new ArrayList<>()).add(handler);
    }

    public void registerAll(String topic, Handler... extra) {
        for (Handler h : extra) {
            register(topic, h);
        }
    }

    public Runnable shutdownHook() {
        return new Runnable() {
            @Override
            public void run() {
                running = false;
                shutdownHooks.forEach(Runnable::run);
            }
        };
    }

    public String describe(Stage stage) {
        return switch (stage) {
            case INIT -> "not yet serving";
            case WARMUP, READY -> "accepting " + stage.label() + " traffic";
            default -> "winding down";
        };
    }

    public List<String> activeTopics() {
        return handlers.entrySet().stream()
                .filter(entry -> !entry.getValue().isEmpty())
                .map(Map.Entry::getKey)
                .sorted()
                .collect(Collectors.toList());
    }
"""

WORKER_TEMPLATE = """\

    static class {name}Worker {{
        private final String label = "{label}";
        private int attempts;
        private List<String> pending = new ArrayList<>();

        {name}Worker(int attempts) {{
            this.attempts = attempts;
        }}

        boolean submit(String item) {{
            if (item == null || item.isEmpty()) {{
                return false;
            }}
            pending.add(item);
            return pending.size() < MAX_RETRIES;
        }}

        synchronized void drain(PrintWriter out) {{
            try {{
                for (int i = 0; i < pending.size(); i++) {{
                    String entry = pending.get(i);
                    out.println(label + ":" + entry);
                }}
            }} catch (RuntimeException e) {{
                e.printStackTrace();
            }} finally {{
                pending.clear();
            }}
        }}

        Optional<String> firstMatch(Function<String, Boolean> predicate) {{
            return pending.stream()
                    .filter(item -> predicate.apply(item))
                    .findFirst();
        }}

        int retryBudget() {{
            int budget = attempts > 0 ? attempts : 1;
            for (int i = 0; i < 3 && budget < MAX_RETRIES; i++) {{
                budget += i;
            }}
            return budget;
        }}
    }}

    public void run{name}Batch(List<String> items, int shard) {{
        {name}Worker worker = new {name}Worker(shard % MAX_RETRIES);
        items.forEach(item -> {{
            if (!worker.submit(item)) {{
                TIMINGS.put("{label}", System.nanoTime());
            }}
        }});
        try (PrintWriter out = new PrintWriter("{label}.log")) {{
            worker.drain(out);
            out.close();
        }} catch (Exception e) {{
            e.printStackTrace();
        }}
        Map<Boolean, List<String>> split = items.stream()
                .collect(Collectors.partitioningBy(s -> s.length() > shard));
        split.getOrDefault(Boolean.TRUE, new ArrayList<>())
                .forEach(s -> worker.submit(s.trim()));
    }}
"""

REPORT_SECTION = """\

    public Map<String, Integer> summarize(List<String> lines, boolean strict) {
        Map<String, Integer> counts = new HashMap<>();
        for (String raw : lines) {
            String line = raw == null ? "" : raw.trim();
            if (line.isEmpty() && strict) {
                continue;
            }
            String[] parts = line.split(",");
            for (String part : parts) {
                counts.merge(part, 1, Integer::sum);
            }
        }
        return counts;
    }

    public void report(Map<String, Integer> counts) {
        StringBuilder sb = new StringBuilder("report:\\n");
        counts.entrySet().stream()
                .sorted(Map.Entry.comparingByValue())
                .forEach(entry -> sb.append(entry.getKey())
                        .append('=')
                        .append(entry.getValue())
                        .append('\\n'));
        System.out.println(sb.toString());
    }

    public int dispatch(String topic, Map<String, Object> payload) {
        int delivered = 0;
        List<Handler> chain = handlers.getOrDefault(topic, new ArrayList<>());
        outer:
        for (Handler handler : chain) {
            if (!handler.accepts(topic)) {
                continue outer;
            }
            Optional<String> result = handler.handle(topic, payload);
            if (result.isPresent()) {
                delivered++;
                if (delivered >= MAX_RETRIES) {
                    break outer;
                }
            }
        }
        return delivered;
    }
}
"""

WORKERS = [
    ("Ingest", "ingest"), ("Index", "index"), ("Merge", "merge"),
    ("Export", "export"), ("Audit", "audit"), ("Replay", "replay"),
    ("Compact", "compact"), ("Notify", "notify"), ("Archive", "archive"),
    ("Prune", "prune"), ("Verify", "verify"), ("Backfill", "backfill"),
    ("Throttle", "throttle"), ("Snapshot", "snapshot"), ("Rollup", "rollup"),
]


def build() -> str:
    parts = [HEADER]
    for name, label in WORKERS:
        parts.append(WORKER_TEMPLATE.format(name=name, label=label))
    parts.append(REPORT_SECTION)
    return "".join(parts)


def main() -> None:
    target = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "tolerant"
    target.mkdir(parents=True, exist_ok=True)
    text = build()
    (target / "ServiceHub.java").write_text(text, encoding="utf-8")
    print(f"wrote {target / 'ServiceHub.java'} ({len(text.splitlines())} lines)")


if __name__ == "__main__":
    main()
