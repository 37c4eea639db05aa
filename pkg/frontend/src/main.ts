// DOM wiring for the play UI: room picker, scene panel, action buttons,
// answer box (puzzle mode only), inventory, progress, history, summary.
// Plain request/response after each click; one in-flight request per tab.

import { ApiError, GameApi, type ObservationPayload, type StepResponse } from "./api.js";
import {
    actionButtons,
    actionLabel,
    checkpointProgress,
    describeStep,
    formatElapsed,
    shortcutAction,
    showAnswerBox,
    summaryLines,
    wrapAnswer,
} from "./state.js";

const api = new GameApi("..");  // the UI is served at /ui/, the API at the root

function el<T extends HTMLElement>(id: string): T {
    const node = document.getElementById(id);
    if (!node) throw new Error(`missing element #${id}`);
    return node as T;
}

const roomSelect = el<HTMLSelectElement>("room-select");
const startButton = el<HTMLButtonElement>("start-button");
const banner = el<HTMLDivElement>("error-banner");
const bannerText = el<HTMLSpanElement>("error-text");
const retryButton = el<HTMLButtonElement>("error-retry");
const game = el<HTMLDivElement>("game");
const sceneCaption = el<HTMLParagraphElement>("scene-caption");
const sceneMeta = el<HTMLParagraphElement>("scene-meta");
const hintBox = el<HTMLDivElement>("hint");
const actionsBox = el<HTMLDivElement>("actions");
const answerRow = el<HTMLDivElement>("answer-row");
const answerInput = el<HTMLInputElement>("answer-input");
const answerSubmit = el<HTMLButtonElement>("answer-submit");
const inventoryList = el<HTMLUListElement>("inventory");
const stepCounter = el<HTMLSpanElement>("step-counter");
const timer = el<HTMLSpanElement>("timer");
const progress = el<HTMLSpanElement>("progress");
const notice = el<HTMLDivElement>("notice");
const historyList = el<HTMLOListElement>("history");
const summaryBox = el<HTMLDivElement>("summary");

let sessionId = "";
let observation: ObservationPayload | null = null;
let busy = false;
let startedAt = 0;
let timerHandle: number | undefined;
let lastRetry: () => void = () => {};

function showError(message: string, retry: () => void): void {
    bannerText.textContent = message;
    lastRetry = retry;
    banner.hidden = false;
}

retryButton.addEventListener("click", () => {
    banner.hidden = true;
    lastRetry();
});

function showNotice(message: string): void {
    notice.textContent = message;
    notice.hidden = message === "";
}

function renderObservation(obs: ObservationPayload): void {
    observation = obs;
    sceneCaption.textContent = obs.caption;
    sceneMeta.textContent = `${obs.direction} side - ${obs.scene_key}`;
    stepCounter.textContent = `step ${obs.step_count}`;
    progress.textContent = checkpointProgress(obs);
    hintBox.hidden = !obs.hint;
    hintBox.textContent = obs.hint ? `Hint: ${obs.hint}` : "";

    inventoryList.replaceChildren(
        ...obs.inventory.map((entry) => {
            const li = document.createElement("li");
            li.textContent = entry;
            return li;
        }),
    );
    if (obs.inventory.length === 0) {
        const li = document.createElement("li");
        li.className = "empty";
        li.textContent = "(empty)";
        inventoryList.appendChild(li);
    }

    actionsBox.replaceChildren(
        ...actionButtons(obs).map((action) => {
            const button = document.createElement("button");
            button.textContent = action;
            button.addEventListener("click", () => void act(action));
            return button;
        }),
    );
    answerRow.hidden = !showAnswerBox(obs);
    if (showAnswerBox(obs)) answerInput.focus();
}

function appendHistory(step: StepResponse, action: string): void {
    const entry = describeStep(step, action);
    const li = document.createElement("li");
    const events = entry.events.length ? ` — ${entry.events.join(", ")}` : "";
    const checkpoints = entry.checkpoints.length
        ? ` ✓ ${entry.checkpoints.join(", ")}`
        : "";
    li.textContent = `${entry.step}. ${entry.action}${events}${checkpoints}`;
    historyList.appendChild(li);
    historyList.scrollTop = historyList.scrollHeight;
}

function renderSummary(step: StepResponse): void {
    if (!step.summary) return;
    summaryBox.replaceChildren(
        ...summaryLines(step.summary).map((line) => {
            const p = document.createElement("p");
            p.textContent = line;
            return p;
        }),
    );
    summaryBox.hidden = false;
    actionsBox.replaceChildren();
    answerRow.hidden = true;
    if (timerHandle !== undefined) window.clearInterval(timerHandle);
}

async function act(action: string): Promise<void> {
    if (busy || !sessionId) return;
    busy = true;
    showNotice("");
    try {
        const step = await api.postAction(sessionId, action);
        appendHistory(step, action);
        renderObservation(step.observation);
        if (step.terminal) renderSummary(step);
    } catch (error) {
        if (error instanceof ApiError && error.isRejection) {
            // Rejected action: show why and re-render a fresh action list.
            showNotice(`"${actionLabel(action)}" is not available right now.`);
            try {
                renderObservation(await api.getObservation(sessionId));
            } catch {
                /* the follow-up fetch failing falls through to the banner */
            }
        } else {
            showError(`The game server did not respond (${String(error)}).`, () => void act(action));
        }
    } finally {
        busy = false;
    }
}

answerSubmit.addEventListener("click", () => {
    const code = answerInput.value;
    if (!code.trim()) return;
    answerInput.value = "";
    void act(wrapAnswer(code));
});
answerInput.addEventListener("keydown", (event) => {
    if (event.key === "Enter") answerSubmit.click();
});

document.addEventListener("keydown", (event) => {
    if (!observation || busy) return;
    if (event.target instanceof HTMLInputElement) return;
    const action = shortcutAction(event.key, observation);
    if (action) void act(action);
});

async function start(): Promise<void> {
    const roomId = roomSelect.value;
    try {
        const created = await api.createSession(roomId, false);
        sessionId = created.session_id;
        game.hidden = false;
        summaryBox.hidden = true;
        historyList.replaceChildren();
        renderObservation(created.observation);
        startedAt = Date.now();
        if (timerHandle !== undefined) window.clearInterval(timerHandle);
        timerHandle = window.setInterval(() => {
            timer.textContent = formatElapsed((Date.now() - startedAt) / 1000);
        }, 500);
    } catch (error) {
        showError(`Could not start a session (${String(error)}).`, () => void start());
    }
}

startButton.addEventListener("click", () => void start());

async function loadRooms(): Promise<void> {
    try {
        const rooms = await api.listRooms();
        roomSelect.replaceChildren(
            ...rooms.map((room) => {
                const option = document.createElement("option");
                option.value = room.room_id;
                option.textContent = `${room.room_id} (${room.checkpoints} checkpoints)`;
                return option;
            }),
        );
        startButton.disabled = rooms.length === 0;
    } catch (error) {
        showError(`The game server is unreachable (${String(error)}).`, () => void loadRooms());
    }
}

void loadRooms();
