export { SessionApi, ApiError } from "./api.js";
export { DmConsole } from "./console.js";
export type { Renderer } from "./console.js";
export { buildView, formatNumber, sparkline, badgeFor, defaultDrivingRows } from "./view.js";
export type { SessionView, NumberCell, QuestionView, ProbeCard } from "./view.js";
export { DomRenderer, mountConsole } from "./dom.js";
export type * from "./types.js";
