import { Api } from "./api.js";
import { ChatApp } from "./app.js";

// Service base URL comes from ?service=http://host:port; with no parameter
// the page talks to its own origin.
const params = new URLSearchParams(window.location.search);
const base = params.get("service") ?? "";

const root = document.getElementById("app");
if (root === null) throw new Error("missing #app container");

const app = new ChatApp(root, new Api(base));
void app.start();
