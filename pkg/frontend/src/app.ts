import type { SessionApi } from "./api.js";
import { UiSession } from "./session.js";
import type { ViolationView } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function violationLabel(violation: ViolationView): string {
  const binding = Object.entries(violation.binding)
    .map(([name, value]) => `${name}=${value}`)
    .join(", ");
  let label = violation.norm;
  if (binding) label += ` [${binding}]`;
  if (violation.witness !== null) label += ` at step ${violation.witness}`;
  return label;
}

/**
 * Chat window plus a side panel of rules, plan, and broken rules.
 *
 * Everything shown comes straight out of the session's last state payload;
 * rendering is a full rebuild on every change, which is plenty for a panel
 * this size.
 */
export class ChatApp {
  readonly session: UiSession;

  private readonly banner: HTMLDivElement;
  private readonly bannerText: HTMLSpanElement;
  private readonly retryButton: HTMLButtonElement;
  private readonly sessionId: HTMLSpanElement;
  private readonly badge: HTMLSpanElement;
  private readonly transcript: HTMLDivElement;
  private readonly input: HTMLInputElement;
  private readonly sendButton: HTMLButtonElement;
  private readonly normList: HTMLUListElement;
  private readonly traceList: HTMLOListElement;
  private readonly traceText: HTMLParagraphElement;
  private readonly violationList: HTMLUListElement;
  private readonly violationsText: HTMLParagraphElement;

  constructor(root: HTMLElement, api: SessionApi) {
    this.session = new UiSession(api);

    this.bannerText = el("span", "error-text");
    this.retryButton = el("button", "retry-btn", "Retry");
    this.retryButton.type = "button";
    this.banner = el("div", "error-banner");
    this.banner.hidden = true;
    this.banner.append(this.bannerText, this.retryButton);

    this.badge = el("span", "hypo-badge", "hypothetical");
    this.badge.hidden = true;
    this.sessionId = el("span", "session-id", "not connected");
    const topbar = el("div", "topbar");
    const title = el("h1", undefined, "norm agent");
    topbar.append(title, this.badge, this.sessionId);

    this.transcript = el("div", "transcript");
    this.input = el("input", "composer-input");
    this.input.type = "text";
    this.input.placeholder = "Say something to the agent";
    this.sendButton = el("button", "composer-send", "Send");
    this.sendButton.type = "submit";
    const composer = el("form", "composer");
    composer.append(this.input, this.sendButton);
    const chat = el("section", "chat");
    chat.append(this.transcript, composer);

    this.normList = el("ul", "norm-list");
    const norms = el("section", "panel-norms");
    norms.append(el("h2", undefined, "Rules"), this.normList);

    this.traceList = el("ol", "trace-list");
    this.traceText = el("p", "trace-text");
    const trace = el("section", "panel-trace");
    trace.append(el("h2", undefined, "Plan"), this.traceList, this.traceText);

    this.violationList = el("ul", "violation-list");
    this.violationsText = el("p", "violations-text");
    const violations = el("section", "panel-violations");
    violations.append(
      el("h2", undefined, "Broken rules"),
      this.violationList,
      this.violationsText,
    );

    const sidebar = el("aside", "sidebar");
    sidebar.append(norms, trace, violations);
    const layout = el("div", "layout");
    layout.append(chat, sidebar);

    root.replaceChildren(this.banner, topbar, layout);

    composer.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.submit();
    });
    this.input.addEventListener("input", () => this.render());
    this.retryButton.addEventListener("click", () => {
      if (this.session.id === null) {
        void this.session.connect();
      } else {
        this.session.dismissError();
      }
    });
    this.session.onChange(() => this.render());
    this.render();
  }

  async start(): Promise<boolean> {
    return this.session.connect();
  }

  async submit(): Promise<boolean> {
    const sent = await this.session.send(this.input.value);
    if (sent) this.input.value = "";
    this.render();
    return sent;
  }

  render(): void {
    const s = this.session;
    this.banner.hidden = s.connectionError === null;
    this.bannerText.textContent = s.connectionError ?? "";
    this.sessionId.textContent = s.id ?? "not connected";
    this.badge.hidden = !(s.state?.alt_active ?? false);

    this.input.disabled = s.pending || s.id === null;
    this.sendButton.disabled =
      s.pending || s.id === null || this.input.value.trim() === "";

    this.transcript.replaceChildren(
      ...s.lines.map((line) => el("div", `msg ${line.kind}`, line.text)),
    );
    this.transcript.scrollTop = this.transcript.scrollHeight;

    const state = s.state;
    if (state === null) {
      this.normList.replaceChildren();
      this.traceList.replaceChildren();
      this.traceText.textContent = "";
      this.violationList.replaceChildren();
      this.violationsText.textContent = "";
      return;
    }

    this.normList.replaceChildren(
      ...state.norms.map((vel, i) => {
        const item = el("li", "norm-item");
        item.append(
          el("div", "norm-vel", vel),
          el("div", "norm-english", state.norms_text[i] ?? ""),
        );
        return item;
      }),
    );

    this.traceList.replaceChildren(
      ...state.trace.map((action) => el("li", "trace-action", action)),
    );
    this.traceText.textContent = state.trace_text;

    if (state.violations.length === 0) {
      this.violationList.replaceChildren(el("li", "violations-none", "(none)"));
    } else {
      this.violationList.replaceChildren(
        ...state.violations.map((violation) =>
          el("li", "violation-item", violationLabel(violation)),
        ),
      );
    }
    this.violationsText.textContent = state.violations_text;
  }
}
