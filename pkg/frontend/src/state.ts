// Pure view-model helpers: everything main.ts renders is derived here so it
// can be unit-tested without a DOM.

import type { ObservationPayload, SessionSummary, StepResponse } from "./api.js";

export const ANSWER_AFFORDANCE = "<ANSWER>your answer</ANSWER>";

export interface HistoryEntry {
    step: number;
    action: string;
    events: string[];
    checkpoints: string[];
}

// Buttons must exactly mirror the server's list, minus the answer
// affordance, which renders as the code input instead.
export function actionButtons(observation: ObservationPayload): string[] {
    return observation.available_actions.filter((a) => a !== ANSWER_AFFORDANCE);
}

export function showAnswerBox(observation: ObservationPayload): boolean {
    return observation.puzzle_mode;
}

export function wrapAnswer(code: string): string {
    return `<ANSWER>${code.trim()}</ANSWER>`;
}

const EVENT_LABELS: Record<string, string> = {
    wrong_answer: "wrong answer",
    lock_opened: "lock opened",
    state_changed: "something changed",
    item_acquired: "picked up",
    item_revealed: "revealed",
    item_consumed: "used up",
    escaped: "escaped!",
    agent_failure: "input substituted",
};

export function describeEvent(event: string): string {
    const [kind, target] = event.split(":", 2);
    const label = EVENT_LABELS[kind ?? ""] ?? kind ?? event;
    return target ? `${label}: ${target.replace(/_/g, " ")}` : label;
}

export function describeStep(step: StepResponse, action: string): HistoryEntry {
    return {
        step: step.observation.step_count,
        action: actionLabel(action),
        events: step.events.map(describeEvent),
        checkpoints: step.new_checkpoints.map((c) => c.replace(/^cp_/, "").replace(/_/g, " ")),
    };
}

export function actionLabel(action: string): string {
    const code = action.match(/<ANSWER>(.*)<\/ANSWER>/i);
    return code ? `answer "${code[1]}"` : action;
}

export function checkpointProgress(observation: ObservationPayload): string {
    return `${observation.achieved_checkpoints} / ${observation.total_checkpoints} checkpoints`;
}

export function formatElapsed(seconds: number): string {
    const total = Math.max(0, Math.floor(seconds));
    const mins = Math.floor(total / 60);
    const secs = total % 60;
    return `${mins}:${secs.toString().padStart(2, "0")}`;
}

export function summaryLines(summary: SessionSummary): string[] {
    const outcome = summary.escaped ? "Escaped!" : `Out of time (${summary.termination})`;
    return [
        outcome,
        `Steps: ${summary.steps}`,
        `Duration: ${formatElapsed(summary.duration_s)}`,
        `Checkpoints: ${summary.achieved_checkpoints} / ${summary.total_checkpoints}`,
        `Goal completion: ${(summary.gc * 100).toFixed(1)}%`,
        `SPL: ${(summary.spl * 100).toFixed(1)}%`,
    ];
}

// Keyboard shortcuts: directions, back, and focusing the answer box.
const KEY_ACTIONS: Record<string, string> = {
    n: "turn_to_north",
    e: "turn_to_east",
    s: "turn_to_south",
    w: "turn_to_west",
    b: "back",
};

export function shortcutAction(key: string, observation: ObservationPayload): string | null {
    const action = KEY_ACTIONS[key.toLowerCase()];
    if (!action) return null;
    return observation.available_actions.includes(action) ? action : null;
}
