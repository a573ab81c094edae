/**
 * Questionnaire state.  The answers-to-rules translation lives in the
 * service (POST /questionnaire), so the client only tracks the booleans and
 * ships them; an answer of true means the syntactic feature is decisive and
 * must survive abstraction.
 */

import type { Question } from "./api.js";

export interface QuestionnaireState {
  questions: Question[];
  answers: Record<string, boolean>;
}

export function freshState(questions: Question[]): QuestionnaireState {
  const answers: Record<string, boolean> = {};
  for (const q of questions) answers[q.id] = true; // everything decisive = identity
  return { questions, answers };
}

export function toggle(state: QuestionnaireState, id: string): QuestionnaireState {
  if (!(id in state.answers)) throw new Error(`unknown question ${id}`);
  return { ...state, answers: { ...state.answers, [id]: !state.answers[id] } };
}

export function requestBody(state: QuestionnaireState): { answers: Record<string, boolean> } {
  return { answers: { ...state.answers } };
}
