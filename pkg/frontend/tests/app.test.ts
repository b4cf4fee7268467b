import { beforeEach, describe, expect, it } from "vitest";

import { ApiError } from "../src/api.js";
import { ChatApp } from "../src/app.js";
import {
  RecordedApi,
  afterMakeItSo,
  afterSuppose,
  flush,
  initial,
} from "./helpers.js";

let root: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = '<div id="app"></div>';
  root = document.getElementById("app")!;
});

function texts(selector: string): string[] {
  return Array.from(root.querySelectorAll(selector)).map(
    (node) => node.textContent ?? "",
  );
}

function one<T extends Element>(selector: string): T {
  const node = root.querySelector(selector);
  if (!node) throw new Error(`missing ${selector}`);
  return node as T;
}

async function settle(app: ChatApp): Promise<void> {
  while (app.session.pending) await flush();
  await flush();
}

async function started(api: RecordedApi): Promise<ChatApp> {
  const app = new ChatApp(root, api);
  await app.start();
  return app;
}

describe("initial render", () => {
  it("shows every fact from the recorded payload verbatim", async () => {
    await started(new RecordedApi());
    expect(one(".session-id").textContent).toBe(initial.id);
    expect(one<HTMLElement>(".hypo-badge").hidden).toBe(true);
    expect(texts(".norm-vel")).toEqual(initial.state.norms);
    expect(texts(".norm-english")).toEqual(initial.state.norms_text);
    expect(texts(".trace-action")).toEqual(initial.state.trace);
    expect(one(".trace-text").textContent).toBe(initial.state.trace_text);
    expect(texts(".violation-item")).toEqual([
      "forall x. F (leave & holding(x)) [x=watch]",
    ]);
    expect(one(".violations-text").textContent).toBe(
      initial.state.violations_text,
    );
    expect(one<HTMLElement>(".error-banner").hidden).toBe(true);
  });

  it("keeps the composer disabled until a session exists", async () => {
    const api = new RecordedApi();
    const app = new ChatApp(root, api);
    expect(one<HTMLInputElement>(".composer-input").disabled).toBe(true);
    expect(one<HTMLButtonElement>(".composer-send").disabled).toBe(true);
    await app.start();
    expect(one<HTMLInputElement>(".composer-input").disabled).toBe(false);
  });
});

describe("composer", () => {
  it("disables send on empty or blank input", async () => {
    await started(new RecordedApi());
    const input = one<HTMLInputElement>(".composer-input");
    const send = one<HTMLButtonElement>(".composer-send");
    expect(send.disabled).toBe(true);
    input.value = "  ";
    input.dispatchEvent(new Event("input"));
    expect(send.disabled).toBe(true);
    input.value = "Make it so.";
    input.dispatchEvent(new Event("input"));
    expect(send.disabled).toBe(false);
  });

  it("disables input while a request is in flight", async () => {
    const api = new RecordedApi();
    const app = await started(api);
    let release!: (r: typeof afterSuppose) => void;
    api.sendUtterance = async () =>
      new Promise((resolve) => {
        release = resolve;
      });
    const input = one<HTMLInputElement>(".composer-input");
    input.value = "Suppose you couldn't hold the watch.";
    const pendingSubmit = app.submit();
    expect(input.disabled).toBe(true);
    release(afterSuppose);
    await pendingSubmit;
    await settle(app);
    expect(input.disabled).toBe(false);
    expect(input.value).toBe("");
  });

  it("submits through the form event", async () => {
    const api = new RecordedApi();
    api.replies = [afterSuppose];
    const app = await started(api);
    const input = one<HTMLInputElement>(".composer-input");
    input.value = "Suppose you didn't have to leave the store.";
    input.dispatchEvent(new Event("input"));
    one<HTMLFormElement>(".composer").dispatchEvent(
      new Event("submit", { cancelable: true }),
    );
    await settle(app);
    expect(texts(".msg.human")).toEqual([
      "Suppose you didn't have to leave the store.",
    ]);
    expect(texts(".msg.agent")).toEqual([afterSuppose.reply]);
  });
});

describe("state updates", () => {
  it("flags hypothetical mode from alt_active and clears it again", async () => {
    const api = new RecordedApi();
    api.replies = [afterSuppose, afterMakeItSo];
    const app = await started(api);
    const badge = one<HTMLElement>(".hypo-badge");

    one<HTMLInputElement>(".composer-input").value = "Suppose.";
    await app.submit();
    expect(badge.hidden).toBe(false);

    one<HTMLInputElement>(".composer-input").value = "Make it so.";
    await app.submit();
    expect(badge.hidden).toBe(true);
    expect(texts(".norm-vel")).toEqual(afterMakeItSo.state.norms);
    expect(texts(".norm-english")).toEqual(afterMakeItSo.state.norms_text);
    expect(texts(".violations-none")).toEqual(["(none)"]);
    expect(one(".violations-text").textContent).toBe(
      afterMakeItSo.state.violations_text,
    );
  });

  it("renders service rejections inline and keeps going", async () => {
    const api = new RecordedApi();
    api.replies = [
      new ApiError(400, "body must have a string 'text'"),
      afterSuppose,
    ];
    const app = await started(api);
    one<HTMLInputElement>(".composer-input").value = "garbled";
    await app.submit();
    expect(texts(".msg.error")).toEqual(["body must have a string 'text'"]);
    expect(one<HTMLElement>(".error-banner").hidden).toBe(true);
    expect(one<HTMLInputElement>(".composer-input").value).toBe("garbled");

    one<HTMLInputElement>(".composer-input").value = "Suppose.";
    await app.submit();
    expect(texts(".msg.agent")).toEqual([afterSuppose.reply]);
  });
});

describe("connection errors", () => {
  it("shows the banner and reconnects via retry with a fresh id", async () => {
    const api = new RecordedApi();
    api.failConnect = new TypeError("fetch failed");
    const app = new ChatApp(root, api);
    await app.start();
    const banner = one<HTMLElement>(".error-banner");
    expect(banner.hidden).toBe(false);
    expect(one(".error-text").textContent).toBe("fetch failed");
    expect(one(".session-id").textContent).toBe("not connected");

    api.failConnect = null;
    api.nextId = "second";
    one<HTMLButtonElement>(".retry-btn").click();
    await settle(app);
    expect(banner.hidden).toBe(true);
    expect(one(".session-id").textContent).toBe("second");
    expect(texts(".norm-item")).toHaveLength(2);
  });
});
