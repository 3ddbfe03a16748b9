// Small syntax highlighter for the python-style snippets questions carry.
// Produces one <li> per source line so the list markers double as line
// numbers; everything is escaped before any markup is added.

const KEYWORDS = new Set([
  "and", "break", "continue", "def", "elif", "else", "for", "if", "in",
  "not", "or", "pass", "return", "while", "True", "False", "None",
]);

const BUILTINS = new Set(["print", "range", "len", "int", "str", "abs"]);

const TOKEN = /#.*$|"(?:[^"\\]|\\.)*"|'(?:[^'\\]|\\.)*'|\b\d+(?:\.\d+)?\b|\b[A-Za-z_][A-Za-z0-9_]*\b/gm;

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function classify(token: string): string | null {
  if (token.startsWith("#")) return "hl-comment";
  if (token.startsWith('"') || token.startsWith("'")) return "hl-string";
  if (/^\d/.test(token)) return "hl-number";
  if (KEYWORDS.has(token)) return "hl-keyword";
  if (BUILTINS.has(token)) return "hl-builtin";
  return null;
}

export function highlightLine(line: string): string {
  let out = "";
  let last = 0;
  for (const match of line.matchAll(TOKEN)) {
    const index = match.index ?? 0;
    out += escapeHtml(line.slice(last, index));
    const cls = classify(match[0]);
    out += cls === null
      ? escapeHtml(match[0])
      : `<span class="${cls}">${escapeHtml(match[0])}</span>`;
    last = index + match[0].length;
  }
  return out + escapeHtml(line.slice(last));
}

/** Whole snippet -> <ol> markup with one numbered <li> per line. */
export function highlightCode(source: string): string {
  const body = source.endsWith("\n") ? source.slice(0, -1) : source;
  const items = body
    .split("\n")
    .map((line) => `<li><code>${highlightLine(line)}</code></li>`)
    .join("");
  return `<ol class="code-lines">${items}</ol>`;
}
