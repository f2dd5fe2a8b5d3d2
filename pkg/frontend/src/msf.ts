/** Interval algebra for the marking.
 *
 * The editor works in seconds (half-open [start, end) pairs); the server
 * stores integer sample intervals. Everything here keeps intervals in the
 * canonical form: sorted, disjoint, touching runs merged.
 */

export type Interval = [number, number];

export function normalize(intervals: readonly Interval[]): Interval[] {
  const kept = intervals.filter(([s, e]) => e > s).map((iv): Interval => [iv[0], iv[1]]);
  kept.sort((a, b) => a[0] - b[0] || a[1] - b[1]);
  const out: Interval[] = [];
  for (const [s, e] of kept) {
    const last = out[out.length - 1];
    if (last && s <= last[1]) {
      last[1] = Math.max(last[1], e);
    } else {
      out.push([s, e]);
    }
  }
  return out;
}

export function addInterval(marks: readonly Interval[], iv: Interval): Interval[] {
  return normalize([...marks, iv]);
}

export function subtractInterval(marks: readonly Interval[], iv: Interval): Interval[] {
  const [a, b] = iv;
  if (b <= a) return normalize(marks);
  const out: Interval[] = [];
  for (const [s, e] of normalize(marks)) {
    if (e <= a || s >= b) {
      out.push([s, e]);
      continue;
    }
    if (s < a) out.push([s, a]);
    if (e > b) out.push([b, e]);
  }
  return out;
}

/** One drag gesture. Dragging entirely inside a single marked interval
 * erases that span (splitting the interval); any other drag adds, which
 * extends or merges whatever it touches. Zero-length drags do nothing. */
export function applyDrag(marks: readonly Interval[], drag: Interval): Interval[] {
  let [a, b] = drag;
  if (b < a) [a, b] = [b, a];
  if (b === a) return normalize(marks);
  const norm = normalize(marks);
  const inside = norm.some(([s, e]) => s <= a && b <= e);
  return inside ? subtractInterval(norm, [a, b]) : addInterval(norm, [a, b]);
}

export function intervalSetEquals(a: readonly Interval[], b: readonly Interval[]): boolean {
  const na = normalize(a);
  const nb = normalize(b);
  return na.length === nb.length &&
    na.every(([s, e], i) => s === nb[i]![0] && e === nb[i]![1]);
}

/** Seconds to integer sample intervals; rounding can collapse slivers. */
export function toSamples(marksSeconds: readonly Interval[], rate: number): Interval[] {
  const ivs = marksSeconds.map(([s, e]): Interval =>
    [Math.round(s * rate), Math.round(e * rate)]);
  return normalize(ivs.filter(([s, e]) => e > s));
}

export function toSeconds(samples: readonly Interval[], rate: number): Interval[] {
  return samples.map(([s, e]): Interval => [s / rate, e / rate]);
}
