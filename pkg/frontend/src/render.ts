// Thin DOM layer: draws the card grid from view-models and forwards user
// actions to the controller. No state lives here.

import { BudgetView, CandidateCard } from './state.js'

export interface Handlers {
  onRate(index: number, level: number): void
  onFreeze(candidate: number, classIndex: number): void
  onUnfreeze(elements: number[]): void
  onSubmit(): void
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag)
  if (className) node.className = className
  if (text !== undefined) node.textContent = text
  return node
}

export function renderBudget(target: HTMLElement, budget: BudgetView): void {
  target.textContent =
    `generation ${budget.generation} · ` +
    `${budget.evaluations}/${budget.cap} evaluations ` +
    `(${budget.remaining} remaining)` +
    (budget.exhausted ? ' · session exhausted' : '')
}

export function renderWarnings(target: HTMLElement, warnings: string[]): void {
  target.textContent = warnings.join('; ')
  target.hidden = warnings.length === 0
}

export function renderError(target: HTMLElement, message: string | null): void {
  target.textContent = message ?? ''
  target.hidden = message === null
}

export function renderCards(
  grid: HTMLElement,
  cards: CandidateCard[],
  frozenElementsByNames: (names: string[]) => number[] | null,
  handlers: Handlers,
  disabled: boolean,
): void {
  grid.replaceChildren()
  for (const card of cards) {
    const cardNode = el('article', 'card')
    const head = el('header', 'card-head')
    head.append(
      el('span', 'card-title', `candidate ${card.index}`),
      el('span', 'badge', `coupling ${card.couplingBadge}`),
    )
    cardNode.append(head)

    for (const box of card.classes) {
      const boxNode = el('section', box.frozen ? 'class-box frozen' : 'class-box')
      if (box.frozen) boxNode.append(el('div', 'pin', 'pinned'))
      boxNode.append(el('div', 'compartment attributes', box.attributes.join('\n')))
      boxNode.append(el('div', 'compartment methods', box.methods.join('\n')))
      if (box.canFreeze && !disabled) {
        const button = el('button', 'freeze-toggle', box.frozen ? 'release' : 'keep')
        button.addEventListener('click', () => {
          if (box.frozen) {
            const elements = frozenElementsByNames([
              ...box.attributes,
              ...box.methods,
            ])
            if (elements) handlers.onUnfreeze(elements)
          } else {
            handlers.onFreeze(card.index, box.classIndex)
          }
        })
        boxNode.append(button)
      }
      cardNode.append(boxNode)
    }

    const ratingNode = el('div', 'rating')
    ratingNode.append(el('span', undefined, 'rating: '))
    const select = el('select')
    select.disabled = disabled
    const unrated = el('option', undefined, '-')
    unrated.value = ''
    select.append(unrated)
    for (const level of card.levels) {
      const option = el('option', undefined, String(level))
      option.value = String(level)
      if (card.rating === level) option.selected = true
      select.append(option)
    }
    select.addEventListener('change', () => {
      if (select.value !== '') handlers.onRate(card.index, Number(select.value))
    })
    ratingNode.append(select)
    cardNode.append(ratingNode)
    grid.append(cardNode)
  }
}
