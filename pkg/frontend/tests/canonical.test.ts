/** The canonical serializer must be byte-compatible with the server's
 * (sorted keys, compact separators, ASCII escapes, trailing newline).
 * Cross-checked against an independent serializer rather than hand-written
 * expectations. */

import { execFileSync } from "node:child_process";
import { describe, expect, test } from "vitest";
import { canonicalJson } from "../src/canonical.js";

const ORACLE_SCRIPT =
  "import json,sys;sys.stdout.write(json.dumps(json.load(sys.stdin),sort_keys=True,separators=(',',':'))+'\\n')";

function oracle(value: unknown): string {
  return execFileSync("python3", ["-c", ORACLE_SCRIPT], {
    input: JSON.stringify(value),
    encoding: "utf8",
  });
}

describe("canonicalJson", () => {
  const samples: unknown[] = [
    { b: 1, a: [true, null, "x"] },
    { z: { b: 2, a: 1 }, m: [{ y: 0, x: [] }] },
    { s: 'quote " backslash \\ newline \n tab \t accent \u00e9' },
    { vars: ["d1"], terms: [{ exp: [1], coef: "1" }] },
    [],
    {},
    "plain",
    42,
    true,
    null,
  ];

  test.each(samples.map((value) => [JSON.stringify(value), value]))(
    "matches the reference serializer for %s",
    (_label, value) => {
      expect(canonicalJson(value)).toBe(oracle(value));
    },
  );

  test("sorts keys recursively and ends with one newline", () => {
    const out = canonicalJson({ b: { d: 1, c: 2 }, a: 3 });
    expect(out).toBe('{"a":3,"b":{"c":2,"d":1}}\n');
  });

  test("escapes non-ascii characters", () => {
    expect(canonicalJson("\u00e9")).toBe('"\\u00e9"\n');
  });
});
